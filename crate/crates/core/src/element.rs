//! Elements of a signature as exact linear combinations of normal-form
//! monomials, and the normal-ordering product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::monomial::Monomial;
use crate::scalar::Scalar;
use crate::signature::{GeneratorKind, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different signatures ({0} vs {1})")]
    SignatureMismatch(String, String),
    #[error("{coeffs} coefficients for {elems} elements")]
    LengthMismatch { coeffs: usize, elems: usize },
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("negative exponent on non-invertible generator `{0}`")]
    BadExponent(String),
    #[error("element is not a unit")]
    NotInvertible,
    #[error("generator index {0} out of range")]
    UnknownGenerator(usize),
    #[error("coefficient from field {found} used in a signature over {expected}")]
    FieldMismatch { expected: String, found: String },
}

/// Total or weighted degree; the zero element has degree `NegInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A canonical element: no zero coefficients, every key a normal-form
/// monomial of `sig`.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    sig: Signature,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero(sig: &Signature) -> Self {
        Element { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn one(sig: &Signature) -> Self {
        Self::scalar(sig, sig.field().one())
    }

    pub fn from_i64(sig: &Signature, v: i64) -> Self {
        Self::scalar(sig, sig.field().from_i64(v))
    }

    pub fn scalar(sig: &Signature, c: Scalar) -> Self {
        Self::term(sig, Monomial::one(sig.generator_count()), c)
    }

    pub fn generator(sig: &Signature, gen: usize) -> Self {
        assert!(gen < sig.generator_count(), "generator {gen} out of range");
        Self::monomial(sig, Monomial::generator(sig.generator_count(), gen))
    }

    pub fn monomial(sig: &Signature, m: Monomial) -> Self {
        Self::term(sig, m, sig.field().one())
    }

    pub fn term(sig: &Signature, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.len(), sig.generator_count(), "monomial length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element { sig: sig.clone(), terms }
    }

    /// Builds an element from raw terms, summing duplicates and checking
    /// exponents against the signature.
    pub fn from_terms(
        sig: &Signature,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Element::zero(sig);
        for (m, c) in terms {
            if m.len() != sig.generator_count() {
                return Err(AlgebraError::UnknownGenerator(m.len()));
            }
            if c.field() != sig.field() {
                return Err(AlgebraError::FieldMismatch {
                    expected: sig.field().to_string(),
                    found: c.field().to_string(),
                });
            }
            if let Some(g) = (0..m.len()).find(|&g| m.exponent(g) < 0 && !sig.is_laurent(g)) {
                return Err(AlgebraError::BadExponent(sig.generators()[g].name.clone()));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for elements of the base field (including zero).
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.sig.field().zero())
    }

    /// The term with the largest monomial.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.sig.generator_count()))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.sig != other.sig {
            return Err(AlgebraError::SignatureMismatch(self.sig.to_string(), other.sig.to_string()));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(&self.sig);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Element { sig: self.sig.clone(), terms }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// `self + c * other`, in place.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        assert!(self.sig == other.sig, "signature mismatch");
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        let mut out = Element::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coef = ca * cb;
                for (m, k) in monomial_product(&self.sig, ma, mb) {
                    out.add_term(m, &coef * &self.sig.field().from_bigint(&k));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut acc = Element::one(&self.sig);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit: a single term supported on Laurent generators.
    pub fn inverse_unit(&self) -> Result<Element, AlgebraError> {
        if self.terms.len() != 1 {
            return Err(AlgebraError::NotInvertible);
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if (0..m.len()).any(|g| m.exponent(g) != 0 && !self.sig.is_laurent(g)) {
            return Err(AlgebraError::NotInvertible);
        }
        let inv = Monomial::from_exponents(m.exponents().iter().map(|e| -e).collect());
        Ok(Element::term(&self.sig, inv, c.inverse().map_err(|_| AlgebraError::NotInvertible)?))
    }

    pub fn total_degree(&self) -> Degree {
        self.terms.keys().map(|m| Degree::Finite(m.total_degree())).max().unwrap_or(Degree::NegInfinity)
    }

    pub fn partial_degree(&self, gen: usize) -> Result<i64, AlgebraError> {
        if gen >= self.sig.generator_count() {
            return Err(AlgebraError::UnknownGenerator(gen));
        }
        self.terms.keys().map(|m| m.exponent(gen) as i64).max().ok_or(AlgebraError::ZeroElement)
    }

    /// Moves the signature reference, keeping the terms. Used when an
    /// element is reinterpreted in a signature with the same generator layout.
    pub(crate) fn with_signature(&self, sig: &Signature) -> Element {
        debug_assert_eq!(sig.generator_count(), self.sig.generator_count());
        Element { sig: sig.clone(), terms: self.terms.clone() }
    }

    /// Keeps only the terms selected by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Element {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Element { sig: self.sig.clone(), terms }
    }
}

/// Normal-ordered product of two basis monomials as integer-weighted terms.
///
/// For each non-graded Weyl pair, `y^b x^c = Σ_k (-1)^k k! C(b,k) C(c,k) x^(c-k) y^(b-k)`;
/// distinct pairs and commutative generators contribute independently.
pub fn monomial_product(sig: &Signature, a: &Monomial, b: &Monomial) -> Vec<(Monomial, BigInt)> {
    let base = a.mul(b);
    let mut out: Vec<(Vec<i32>, BigInt)> = vec![(base.exponents().to_vec(), BigInt::one())];
    for pair in sig.weyl_pairs() {
        if pair.graded {
            continue;
        }
        let ys = a.exponent(pair.y);
        let xs = b.exponent(pair.x);
        let kmax = ys.min(xs);
        if kmax <= 0 {
            continue;
        }
        let weights = reorder_coefficients(ys as u32, xs as u32);
        let mut next = Vec::with_capacity(out.len() * weights.len());
        for (exps, c) in &out {
            for (k, w) in weights.iter().enumerate() {
                let mut e = exps.clone();
                e[pair.x] -= k as i32;
                e[pair.y] -= k as i32;
                next.push((e, c * w));
            }
        }
        out = next;
    }
    out.into_iter().map(|(e, c)| (Monomial::from_exponents(e), c)).collect()
}

/// `(-1)^k k! C(m,k) C(n,k)` for `k = 0..=min(m,n)`.
fn reorder_coefficients(m: u32, n: u32) -> Vec<BigInt> {
    let kmax = m.min(n);
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut cur = BigInt::one();
    out.push(cur.clone());
    for k in 1..=kmax {
        // ratio between consecutive terms: -(m-k+1)(n-k+1)/k
        cur = -(cur * BigInt::from(m - k + 1) * BigInt::from(n - k + 1)) / BigInt::from(k);
        out.push(cur.clone());
    }
    debug_assert!(out.iter().all(|c| !c.is_zero()));
    out
}

/// Signature-checked product.
pub fn multiply(f: &Element, g: &Element) -> Result<Element, AlgebraError> {
    f.try_mul(g)
}

/// Exact linear combination `Σ coeffs[i] * elems[i]`.
pub fn combine(sig: &Signature, coeffs: &[Scalar], elems: &[Element]) -> Result<Element, AlgebraError> {
    if coeffs.len() != elems.len() {
        return Err(AlgebraError::LengthMismatch { coeffs: coeffs.len(), elems: elems.len() });
    }
    let mut out = Element::zero(sig);
    for (c, e) in coeffs.iter().zip(elems) {
        if e.signature() != sig {
            return Err(AlgebraError::SignatureMismatch(sig.to_string(), e.signature().to_string()));
        }
        if c.field() != sig.field() {
            return Err(AlgebraError::FieldMismatch { expected: sig.field().to_string(), found: c.field().to_string() });
        }
        out.add_scaled(c, e);
    }
    Ok(out)
}

pub fn commutator(f: &Element, g: &Element) -> Result<Element, AlgebraError> {
    Ok(&f.try_mul(g)? - &g.try_mul(f)?)
}

/// True iff `f` commutes with every generator of its signature.
pub fn is_central(f: &Element) -> bool {
    let sig = f.signature();
    (0..sig.generator_count()).all(|g| {
        // Only Weyl generators can fail to commute with anything.
        match sig.generators()[g].kind {
            GeneratorKind::WeylX(_) | GeneratorKind::WeylY(_) => {
                commutator(f, &Element::generator(sig, g)).expect("same signature").is_zero()
            }
            _ => true,
        }
    })
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("signature mismatch")
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_add(&-rhs).expect("signature mismatch")
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("signature mismatch")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Element { sig: self.sig.clone(), terms }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_element(self))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}
