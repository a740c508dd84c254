//! Scripted closure: drive a seed down to degree one by shift differences,
//! recover `1` and every generator, then produce every monomial up to the
//! cap with triangular differences and Vandermonde pencils. Each move is a
//! recorded step, so the result is a replayable certificate.

use std::collections::{BTreeMap, BTreeSet};

use crate::closure::certificate::{CertStep, ClosureCertificate, Derivation};
use crate::closure::ClosureError;
use crate::element::{Degree, Element};
use crate::family::{permutation_matrix, transposition, AutFamily};
use crate::linalg::{identity_matrix, SpanBasis};
use crate::monomial::{monomials_up_to, Monomial};
use crate::scalar::{Field, Scalar};
use crate::signature::Signature;

/// Which generators shift differencing may move, and the kind of algebra
/// the script targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Polynomial,
    Weyl,
}

fn classify(sig: &Signature) -> Result<Kind, ClosureError> {
    if sig.field() != Field::Rational {
        return Err(ClosureError::CharacteristicPositive(sig.field().characteristic()));
    }
    if sig.is_polynomial() {
        Ok(Kind::Polynomial)
    } else if sig.is_weyl() {
        Ok(Kind::Weyl)
    } else {
        Err(ClosureError::UnsupportedSignature(sig.to_string()))
    }
}

/// Variable-selection rule for one differencing step: the first generator
/// of partial degree `>= 2`; otherwise the first of partial degree 1 whose
/// cofactor is not a scalar.
fn select_generator(f: &Element) -> Option<usize> {
    let n = f.signature().generator_count();
    let degs: Vec<i64> = (0..n).map(|g| f.partial_degree(g).unwrap_or(0)).collect();
    if let Some(g) = (0..n).find(|&g| degs[g] >= 2) {
        return Some(g);
    }
    (0..n).find(|&g| {
        degs[g] == 1
            && f.terms().any(|(m, _)| m.exponent(g) == 1 && (0..n).any(|h| h != g && m.exponent(h) != 0))
    })
}

fn reduce_in(d: &mut Derivation, mut id: usize) -> Result<usize, ClosureError> {
    let sig = d.signature().clone();
    let one = sig.field().one();
    loop {
        let f = d.result(id).clone();
        let deg = match f.total_degree() {
            Degree::Finite(k) => k,
            Degree::NegInfinity => return Err(ClosureError::ScalarSeed),
        };
        if f.is_scalar() {
            return Err(ClosureError::ScalarSeed);
        }
        if deg <= 1 {
            return Ok(id);
        }
        let gen = select_generator(&f).ok_or_else(|| ClosureError::SelectionFailed(f.to_string()))?;
        let shifted = d.apply_family(AutFamily::Shift { gen, by: one.clone() }, id)?;
        let g = d.combine(&[(shifted, one.clone()), (id, -&one)]);
        let next = d.result(g);
        if next.is_scalar() || next.total_degree() > Degree::Finite(deg - 1) {
            return Err(ClosureError::SelectionFailed(f.to_string()));
        }
        id = g;
    }
}

/// Iterated shift differencing `g = σ(f) - f` down to total degree 1.
/// Returns the degree-one element and the steps (step 0 is the seed).
pub fn reduce_to_degree_one(seed: &Element) -> Result<(Element, Vec<CertStep>), ClosureError> {
    classify(seed.signature())?;
    let mut d = Derivation::new(seed.signature());
    let s = d.seed(seed.clone());
    let id = reduce_in(&mut d, s)?;
    Ok((d.result(id).clone(), d.into_steps()))
}

type Coverage = BTreeMap<Monomial, usize>;

fn linear_coefficients(f: &Element) -> Vec<Scalar> {
    let sig = f.signature();
    (0..sig.generator_count()).map(|g| f.coefficient(&Monomial::generator(sig.generator_count(), g))).collect()
}

fn check_degree_one(f: &Element) -> Result<(), ClosureError> {
    match f.total_degree() {
        Degree::Finite(1) => Ok(()),
        Degree::Finite(0) => Err(ClosureError::ZeroLinearPart),
        _ => Err(ClosureError::InputNotDegreeOne(f.to_string())),
    }
}

fn linear_part_polynomial(d: &mut Derivation, id: usize) -> Result<Coverage, ClosureError> {
    let sig = d.signature().clone();
    let q = sig.field();
    let m = sig.generator_count();
    let f = d.result(id).clone();
    check_degree_one(&f)?;
    let a = linear_coefficients(&f);
    let i = a.iter().position(|c| !c.is_zero()).ok_or(ClosureError::ZeroLinearPart)?;
    let zi_el = Element::generator(&sig, i);
    let mut zi = id;
    if f != zi_el {
        // z_i -> (z_i - c - Σ_{j≠i} a_j z_j) / a_i sends f to z_i.
        let inv = a[i].inverse().expect("nonzero");
        let mut matrix = identity_matrix(q, m);
        for j in 0..m {
            matrix[i][j] = if j == i { inv.clone() } else { -&(&a[j] * &inv) };
        }
        let mut translation = vec![q.zero(); m];
        translation[i] = -&(&f.constant_term() * &inv);
        zi = d.apply_family(AutFamily::Linear { matrix, translation }, id)?;
    }
    let mut cov = Coverage::new();
    cov.insert(Monomial::generator(m, i), zi);
    for j in (0..m).filter(|&j| j != i) {
        let s = d.apply_family(AutFamily::Permutation { perm: transposition(m, i, j) }, zi)?;
        cov.insert(Monomial::generator(m, j), s);
    }
    let z1 = cov[&Monomial::generator(m, 0)];
    let shifted = d.apply_family(AutFamily::Shift { gen: 0, by: q.one() }, z1)?;
    let one = d.combine(&[(shifted, q.one()), (z1, -q.one())]);
    cov.insert(Monomial::one(m), one);
    Ok(cov)
}

fn linear_part_weyl(d: &mut Derivation, id: usize) -> Result<Coverage, ClosureError> {
    let sig = d.signature().clone();
    let q = sig.field();
    let n = sig.weyl_pairs().len();
    let len = sig.generator_count();
    let pairs = sig.weyl_pairs().to_vec();
    check_degree_one(d.result(id))?;
    let mut cur = id;
    let mut a = linear_coefficients(d.result(cur));
    if pairs.iter().all(|p| a[p.x].is_zero()) {
        // Only y terms: the swap x_i -> y_i, y_i -> -x_i moves one to x.
        let i = pairs.iter().position(|p| !a[p.y].is_zero()).ok_or(ClosureError::ZeroLinearPart)?;
        cur = d.apply_family(AutFamily::WeylSwap { index: i }, cur)?;
        a = linear_coefficients(d.result(cur));
    }
    let i = pairs.iter().position(|p| !a[p.x].is_zero()).expect("x coefficient present");
    let two = q.from_i64(2);
    let tau = AutFamily::WeylScaling { index: i, factor: two.clone() };
    // f1 = τ(f) - f, f2 = 2τ(f1) - f1 = 3 a_i x_i.
    let t0 = d.apply_family(tau.clone(), cur)?;
    let f1 = d.combine(&[(t0, q.one()), (cur, -q.one())]);
    let t1 = d.apply_family(tau, f1)?;
    let f2 = d.combine(&[(t1, two), (f1, -q.one())]);
    let scale = (&q.from_i64(3) * &a[pairs[i].x]).inverse().expect("nonzero");
    let xi = d.combine(&[(f2, scale)]);

    let mut cov = Coverage::new();
    cov.insert(Monomial::generator(len, pairs[i].x), xi);
    for j in (0..n).filter(|&j| j != i) {
        let matrix = permutation_matrix(&sig, &transposition(n, i, j));
        let s = d.apply_family(AutFamily::WeylLinear { matrix }, xi)?;
        cov.insert(Monomial::generator(len, pairs[j].x), s);
    }
    for (j, p) in pairs.iter().enumerate() {
        let xj = cov[&Monomial::generator(len, p.x)];
        let s = d.apply_family(AutFamily::WeylSwap { index: j }, xj)?;
        cov.insert(Monomial::generator(len, p.y), s);
    }
    let y1 = cov[&Monomial::generator(len, pairs[0].y)];
    let alpha = d.apply_family(AutFamily::AlphaH { index: 0, h: Element::one(&sig) }, y1)?;
    let one = d.combine(&[(alpha, q.one()), (y1, -q.one())]);
    cov.insert(Monomial::one(len), one);
    Ok(cov)
}

/// From a degree-one element, certify `1` and every generator. Returns the
/// steps and the coverage map (monomial → step id).
pub fn linear_part(f: &Element) -> Result<(Vec<CertStep>, BTreeMap<Monomial, usize>), ClosureError> {
    let kind = classify(f.signature())?;
    let mut d = Derivation::new(f.signature());
    let s = d.seed(f.clone());
    let cov = match kind {
        Kind::Polynomial => linear_part_polynomial(&mut d, s)?,
        Kind::Weyl => linear_part_weyl(&mut d, s)?,
    };
    Ok((d.into_steps(), cov))
}

/// Solves for each target monomial as a combination of `images` followed
/// by `helpers`. Row `t` of the output holds the coefficients for target `t`
/// (length `images.len() + helpers.len()`).
pub fn vandermonde_extract(
    images: &[Element],
    helpers: &[Element],
    targets: &[Monomial],
) -> Result<Vec<Vec<Scalar>>, ClosureError> {
    let Some(first) = images.first().or(helpers.first()) else {
        return Err(ClosureError::SingularSystem);
    };
    let sig = first.signature().clone();
    let q = sig.field();
    let cap = images
        .iter()
        .chain(helpers)
        .filter_map(|e| e.total_degree().finite())
        .chain(targets.iter().map(|t| t.total_degree()))
        .max()
        .unwrap_or(0) as u32;
    let mut basis = SpanBasis::new(&sig, cap);
    for e in images.iter().chain(helpers) {
        basis.insert(e)?;
    }
    let width = images.len() + helpers.len();
    targets
        .iter()
        .map(|t| {
            let combo = basis.express(&Element::monomial(&sig, t.clone()))?.ok_or(ClosureError::SingularSystem)?;
            let mut row = vec![q.zero(); width];
            for (k, c) in combo {
                row[k] = c;
            }
            Ok(row)
        })
        .collect()
}

/// Build a combine step for each target from pencil images (and helper
/// steps), recording coverage for the targets not yet covered.
fn extract_into(
    d: &mut Derivation,
    cov: &mut Coverage,
    image_ids: &[usize],
    helper_ids: &[usize],
    targets: &[Monomial],
) -> Result<(), ClosureError> {
    let images: Vec<Element> = image_ids.iter().map(|&i| d.result(i).clone()).collect();
    let helpers: Vec<Element> = helper_ids.iter().map(|&i| d.result(i).clone()).collect();
    let rows = vandermonde_extract(&images, &helpers, targets)?;
    let ids: Vec<usize> = image_ids.iter().chain(helper_ids).copied().collect();
    for (t, row) in targets.iter().zip(rows) {
        if cov.contains_key(t) {
            continue;
        }
        let terms: Vec<(usize, Scalar)> = ids.iter().copied().zip(row).collect();
        let s = d.combine(&terms);
        debug_assert_eq!(d.result(s), &Element::monomial(d.signature(), t.clone()));
        cov.insert(t.clone(), s);
    }
    Ok(())
}

fn polynomial_monomials(d: &mut Derivation, cov: &mut Coverage, cap: u32) -> Result<(), ClosureError> {
    let sig = d.signature().clone();
    let q = sig.field();
    let m = sig.generator_count();
    // Group targets by (e1 + e2, e3, ..., em).
    let mut families: BTreeMap<Vec<i32>, Vec<Monomial>> = BTreeMap::new();
    for t in monomials_up_to(m, cap) {
        let e = t.exponents();
        let mut key = vec![e[0] + e[1]];
        key.extend_from_slice(&e[2..]);
        families.entry(key).or_default().push(t);
    }
    for (key, targets) in families {
        if targets.iter().all(|t| cov.contains_key(t)) {
            continue;
        }
        let big_d = key[0];
        // Source z1^D z2^e3 ... z_{m-1}^em, free of z_m.
        let mut src = vec![0i32; m];
        src[0] = big_d;
        src[1..m - 1].copy_from_slice(&key[1..]);
        let src = Monomial::from_exponents(src);
        let src_id = match cov.get(&src) {
            Some(&s) => s,
            None => {
                let zm = cov[&Monomial::generator(m, m - 1)];
                let tau = AutFamily::Triangular { gen: m - 1, addend: Element::monomial(&sig, src.clone()) };
                let moved = d.apply_family(tau, zm)?;
                d.combine(&[(moved, q.one()), (zm, -q.one())])
            }
        };
        // ψ_c: z1 -> z1 + c z2, z_k -> z_{k+1} (2 <= k < m), z_m -> z2.
        let mut image_ids = Vec::new();
        for c in 0..=big_d {
            let mut matrix = vec![vec![q.zero(); m]; m];
            matrix[0][0] = q.one();
            matrix[0][1] = q.from_i64(c as i64);
            for k in 1..m - 1 {
                matrix[k][k + 1] = q.one();
            }
            if m > 1 {
                matrix[m - 1][1] = q.one();
            }
            let fam = AutFamily::Linear { matrix, translation: vec![q.zero(); m] };
            image_ids.push(d.apply_family(fam, src_id)?);
        }
        extract_into(d, cov, &image_ids, &[], &targets)?;
    }
    Ok(())
}

fn weyl_monomials(d: &mut Derivation, cov: &mut Coverage, cap: u32) -> Result<(), ClosureError> {
    let sig = d.signature().clone();
    let q = sig.field();
    let len = sig.generator_count();
    let pairs = sig.weyl_pairs().to_vec();
    let n = pairs.len();
    let xs: Vec<usize> = pairs.iter().map(|p| p.x).collect();
    let ys: Vec<usize> = pairs.iter().map(|p| p.y).collect();
    let all = monomials_up_to(len, cap);

    // Powers x_i^d = α_{x_i^d}(y_i) - y_i.
    for (i, p) in pairs.iter().enumerate() {
        let yi = cov[&Monomial::generator(len, p.y)];
        for deg in 2..=cap as i32 {
            let t = Monomial::one(len).with_exponent(p.x, deg);
            if cov.contains_key(&t) {
                continue;
            }
            let alpha = AutFamily::AlphaH { index: i, h: Element::monomial(&sig, t.clone()) };
            let moved = d.apply_family(alpha, yi)?;
            let s = d.combine(&[(moved, q.one()), (yi, -q.one())]);
            cov.insert(t, s);
        }
    }

    // Pure x monomials by last support index k, pencils x_{k-1} -> x_{k-1} + c x_k.
    let pure_x = |m: &Monomial| ys.iter().all(|&y| m.exponent(y) == 0);
    for k in 1..n {
        let mut families: BTreeSet<Vec<i32>> = BTreeSet::new();
        for t in all.iter().filter(|t| pure_x(t)) {
            if (k + 1..n).any(|j| t.exponent(xs[j]) != 0) || t.exponent(xs[k]) == 0 {
                continue;
            }
            let mut key: Vec<i32> = xs[..k - 1].iter().map(|&g| t.exponent(g)).collect();
            key.push(t.exponent(xs[k - 1]) + t.exponent(xs[k]));
            families.insert(key);
        }
        for key in families {
            let big_d = *key.last().unwrap();
            let mut src = Monomial::one(len);
            for (j, &e) in key.iter().enumerate() {
                src = src.with_exponent(xs[j], e);
            }
            let src_id = cov[&src];
            // Unknowns: every split of D between x_{k-1} and x_k.
            let targets: Vec<Monomial> = (0..=big_d)
                .map(|s| src.with_exponent(xs[k - 1], s).with_exponent(xs[k], big_d - s))
                .collect();
            let mut image_ids = Vec::new();
            for c in 0..=big_d {
                let mut matrix = identity_matrix(q, n);
                matrix[k - 1][k] = q.from_i64(c as i64);
                image_ids.push(d.apply_family(AutFamily::WeylLinear { matrix }, src_id)?);
            }
            extract_into(d, cov, &image_ids, &[], &targets)?;
        }
    }

    // Mixed monomials, one Weyl index at a time, pencils x_i -> x_i + c y_i.
    for i in 0..n {
        let (xi, yi) = (xs[i], ys[i]);
        let mut families: BTreeSet<(i32, Vec<i32>)> = BTreeSet::new();
        for t in &all {
            if t.exponent(yi) == 0 || (i + 1..n).any(|j| t.exponent(ys[j]) != 0) {
                continue;
            }
            let big_d = t.exponent(xi) + t.exponent(yi);
            let rest = t.with_exponent(xi, 0).with_exponent(yi, 0);
            families.insert((big_d, rest.exponents().to_vec()));
        }
        // Ascending D, so lower index-i degrees are certified first.
        for (big_d, rest) in families {
            let rest = Monomial::from_exponents(rest);
            let split = |a: i32, b: i32| rest.with_exponent(xi, a).with_exponent(yi, b);
            let targets: Vec<Monomial> = (0..=big_d).map(|s| split(s, big_d - s)).collect();
            if targets.iter().all(|t| cov.contains_key(t)) {
                continue;
            }
            let src_id = cov[&split(big_d, 0)];
            let mut helper_ids = Vec::new();
            for total in 0..big_d {
                for a in 0..=total {
                    helper_ids.push(cov[&split(a, total - a)]);
                }
            }
            let mut image_ids = Vec::new();
            for c in 0..=big_d {
                image_ids.push(d.apply_family(AutFamily::BetaIc { index: i, c: q.from_i64(c as i64) }, src_id)?);
            }
            extract_into(d, cov, &image_ids, &helper_ids, &targets)?;
        }
    }
    Ok(())
}

/// Certificate that the Aut-stable span of `seed` contains every monomial
/// of total degree `<= cap`.
pub fn scripted_closure(seed: &Element, cap: u32) -> Result<ClosureCertificate, ClosureError> {
    let sig = seed.signature().clone();
    let kind = classify(&sig)?;
    if kind == Kind::Polynomial && sig.generator_count() < 2 {
        return Err(ClosureError::NeedsTwoVariables);
    }
    let mut d = Derivation::new(&sig);
    let s = d.seed(seed.clone());
    let lin = reduce_in(&mut d, s)?;
    let mut cov = match kind {
        Kind::Polynomial => linear_part_polynomial(&mut d, lin)?,
        Kind::Weyl => linear_part_weyl(&mut d, lin)?,
    };
    match kind {
        Kind::Polynomial => polynomial_monomials(&mut d, &mut cov, cap)?,
        Kind::Weyl => weyl_monomials(&mut d, &mut cov, cap)?,
    }
    let basis = monomials_up_to(sig.generator_count(), cap);
    if let Some(m) = basis.iter().find(|m| !cov.contains_key(m)) {
        return Err(ClosureError::CoverageIncomplete(crate::expr::format_monomial(&sig, m)));
    }
    cov.retain(|m, _| m.total_degree() <= cap as i64);
    Ok(ClosureCertificate { signature: sig, seed: seed.clone(), cap, steps: d.into_steps(), coverage: cov })
}
