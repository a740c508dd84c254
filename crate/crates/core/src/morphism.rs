//! Endomorphisms given by generator images, exact relation checking, and
//! substitution.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::element::{AlgebraError, Element};
use crate::family::AutFamily;
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("relation [{a}, {b}] violated, residual {residual}")]
    RelationViolated { a: String, b: String, residual: String },
    #[error("declared inverse fails on generator `{0}`")]
    InverseFails(String),
    #[error("image of invertible generator `{0}` is not a unit")]
    ImageNotUnit(String),
    #[error("image of `{0}` lives in a different signature")]
    ForeignImage(String),
    #[error("matrix is singular over the coefficient field")]
    SingularMatrix,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("bad polynomial parameter: {0}")]
    BadPolynomial(String),
    #[error("family not applicable: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Generator images, optionally with declared inverse images. Not yet
/// known to be a homomorphism; see [`EndoMap::validate`].
#[derive(Debug, Clone)]
pub struct EndoMap {
    pub name: String,
    sig: Signature,
    images: BTreeMap<usize, Element>,
    inverse_images: Option<BTreeMap<usize, Element>>,
    family: Option<AutFamily>,
}

impl EndoMap {
    pub fn new(name: impl Into<String>, sig: &Signature, images: BTreeMap<usize, Element>) -> Self {
        EndoMap { name: name.into(), sig: sig.clone(), images, inverse_images: None, family: None }
    }

    pub fn with_inverse(mut self, inverse_images: BTreeMap<usize, Element>) -> Self {
        self.inverse_images = Some(inverse_images);
        self
    }

    pub(crate) fn with_family(mut self, family: AutFamily) -> Self {
        self.family = Some(family);
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn images(&self) -> &BTreeMap<usize, Element> {
        &self.images
    }

    pub fn inverse_images(&self) -> Option<&BTreeMap<usize, Element>> {
        self.inverse_images.as_ref()
    }

    pub fn validate(self) -> Result<ValidatedMap, MorphismError> {
        let images = complete_images(&self.sig, &self.images)?;
        check_relations(&self.sig, &images)?;
        let units = unit_inverses(&self.sig, &images)?;
        let forward = Substitution::new(self.sig.clone(), images, units);
        let inverse = match &self.inverse_images {
            None => None,
            Some(inv) => {
                let inv_images = complete_images(&self.sig, inv)?;
                check_relations(&self.sig, &inv_images)?;
                let inv_units = unit_inverses(&self.sig, &inv_images)?;
                let backward = Substitution::new(self.sig.clone(), inv_images, inv_units);
                for g in 0..self.sig.generator_count() {
                    let gen = Element::generator(&self.sig, g);
                    let there_and_back = forward.apply(&backward.images[g]);
                    let back_and_there = backward.apply(&forward.images[g]);
                    if there_and_back != gen || back_and_there != gen {
                        return Err(MorphismError::InverseFails(self.sig.generators()[g].name.clone()));
                    }
                }
                Some(backward)
            }
        };
        Ok(ValidatedMap { name: self.name, family: self.family, forward, inverse })
    }
}

fn complete_images(sig: &Signature, images: &BTreeMap<usize, Element>) -> Result<Vec<Element>, MorphismError> {
    (0..sig.generator_count())
        .map(|g| {
            let name = || sig.generators()[g].name.clone();
            let img = images.get(&g).ok_or_else(|| MorphismError::MissingImage(name()))?;
            if img.signature() != sig {
                return Err(MorphismError::ForeignImage(name()));
            }
            Ok(img.clone())
        })
        .collect()
}

/// Each defining relation `g_a g_b - g_b g_a = c_ab` must map to zero.
fn check_relations(sig: &Signature, images: &[Element]) -> Result<(), MorphismError> {
    let n = sig.generator_count();
    for a in 0..n {
        for b in (a + 1)..n {
            let lhs = crate::element::commutator(&images[a], &images[b])?;
            let residual = &lhs - &Element::from_i64(sig, sig.commutator_constant(a, b));
            if !residual.is_zero() {
                return Err(MorphismError::RelationViolated {
                    a: sig.generators()[a].name.clone(),
                    b: sig.generators()[b].name.clone(),
                    residual: residual.to_string(),
                });
            }
        }
    }
    Ok(())
}

fn unit_inverses(sig: &Signature, images: &[Element]) -> Result<Vec<Option<Element>>, MorphismError> {
    (0..sig.generator_count())
        .map(|g| {
            if !sig.is_laurent(g) {
                return Ok(None);
            }
            images[g]
                .inverse_unit()
                .map(Some)
                .map_err(|_| MorphismError::ImageNotUnit(sig.generators()[g].name.clone()))
        })
        .collect()
}

/// Substitution homomorphism with a cache of generator-image powers.
#[derive(Debug)]
struct Substitution {
    sig: Signature,
    images: Vec<Element>,
    unit_inverses: Vec<Option<Element>>,
    powers: Mutex<HashMap<(usize, i32), Element>>,
}

impl Clone for Substitution {
    fn clone(&self) -> Self {
        Substitution::new(self.sig.clone(), self.images.clone(), self.unit_inverses.clone())
    }
}

impl Substitution {
    fn new(sig: Signature, images: Vec<Element>, unit_inverses: Vec<Option<Element>>) -> Self {
        Substitution { sig, images, unit_inverses, powers: Mutex::new(HashMap::new()) }
    }

    fn power(&self, g: usize, e: i32) -> Element {
        if let Some(p) = self.powers.lock().expect("cache poisoned").get(&(g, e)) {
            return p.clone();
        }
        let p = if e >= 0 {
            self.images[g].pow(e as u32)
        } else {
            self.unit_inverses[g].as_ref().expect("validated unit").pow(e.unsigned_abs())
        };
        self.powers.lock().expect("cache poisoned").insert((g, e), p.clone());
        p
    }

    fn apply(&self, f: &Element) -> Element {
        let mut out = Element::zero(&self.sig);
        for (m, c) in f.terms() {
            // Normal-form monomials are products of generator powers in layout order.
            let mut acc = Element::one(&self.sig);
            for (g, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    acc = &acc * &self.power(g, e);
                }
            }
            out.add_scaled(c, &acc);
        }
        out
    }
}

/// An endomorphism whose relations (and declared inverse, if any) have
/// been checked exactly.
#[derive(Debug, Clone)]
pub struct ValidatedMap {
    name: String,
    family: Option<AutFamily>,
    forward: Substitution,
    inverse: Option<Substitution>,
}

impl ValidatedMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.forward.sig
    }

    /// Family parameters, when built by [`crate::family::builtin_family`].
    pub fn family(&self) -> Option<&AutFamily> {
        self.family.as_ref()
    }

    pub fn image(&self, gen: usize) -> &Element {
        &self.forward.images[gen]
    }

    pub fn is_automorphism(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply(&self, f: &Element) -> Result<Element, MorphismError> {
        if f.signature() != self.signature() {
            return Err(AlgebraError::SignatureMismatch(self.signature().to_string(), f.signature().to_string()).into());
        }
        Ok(self.forward.apply(f))
    }

    pub fn apply_inverse(&self, f: &Element) -> Option<Element> {
        self.inverse.as_ref().map(|inv| inv.apply(f))
    }

    /// `m(f) - f`.
    pub fn difference(&self, f: &Element) -> Result<Element, MorphismError> {
        Ok(&self.apply(f)? - f)
    }
}

pub fn validate_endomorphism(m: EndoMap) -> Result<ValidatedMap, MorphismError> {
    m.validate()
}

pub fn apply_endomorphism(m: &ValidatedMap, f: &Element) -> Result<Element, MorphismError> {
    m.apply(f)
}

pub fn difference(m: &ValidatedMap, f: &Element) -> Result<Element, MorphismError> {
    m.difference(f)
}
