//! Weight filtrations, leading forms in the associated graded ring, and
//! tensor filtrations.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::element::{Degree, Element};
use crate::signature::{GeneratorKind, Signature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("generator `{0}` has negative weight")]
    NegativeWeight(String),
    #[error("invertible generator `{0}` must have weight 0")]
    InvertibleNotDegreeZero(String),
    #[error("expected {expected} weights, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("element from a different signature")]
    SignatureMismatch,
    #[error("leading form of the zero element")]
    ZeroElement,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// `F_i` is the span of monomials of weight `<= i`. Construction validates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFiltration {
    sig: Signature,
    weights: Vec<i64>,
}

impl WeightFiltration {
    pub fn new(sig: &Signature, weights: Vec<i64>) -> Result<Self, FiltrationError> {
        validate_filtration(sig, &weights)?;
        Ok(WeightFiltration { sig: sig.clone(), weights })
    }

    /// Every generator weight 1, except weight 0 on invertible generators.
    pub fn standard(sig: &Signature) -> Self {
        let weights = sig.generators().iter().map(|g| if g.kind == GeneratorKind::Laurent { 0 } else { 1 }).collect();
        WeightFiltration { sig: sig.clone(), weights }
    }

    /// The Bernstein filtration on Weyl atoms; same as [`standard`](Self::standard).
    pub fn bernstein(sig: &Signature) -> Self {
        Self::standard(sig)
    }

    pub fn trivial(sig: &Signature) -> Self {
        WeightFiltration { sig: sig.clone(), weights: vec![0; sig.generator_count()] }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight_degree(&self, f: &Element) -> Degree {
        f.terms().map(|(m, _)| Degree::Finite(m.weight(&self.weights))).max().unwrap_or(Degree::NegInfinity)
    }

    /// Signature of the associated graded ring: Weyl pairs of positive
    /// total weight become commuting.
    pub fn graded_signature(&self) -> Signature {
        let flags: Vec<bool> =
            self.sig.weyl_pairs().iter().map(|p| p.graded || self.weights[p.x] + self.weights[p.y] >= 1).collect();
        self.sig.with_graded_pairs(&flags)
    }

    /// Sum of the maximal-weight terms, read in the graded signature.
    pub fn leading_form(&self, f: &Element) -> Result<Element, FiltrationError> {
        if f.signature() != &self.sig {
            return Err(FiltrationError::SignatureMismatch);
        }
        let Degree::Finite(top) = self.weight_degree(f) else {
            return Err(FiltrationError::ZeroElement);
        };
        let w = &self.weights;
        Ok(f.filter_terms(|m| m.weight(w) == top).with_signature(&self.graded_signature()))
    }
}

pub fn validate_filtration(sig: &Signature, weights: &[i64]) -> Result<(), FiltrationError> {
    if weights.len() != sig.generator_count() {
        return Err(FiltrationError::WrongLength { expected: sig.generator_count(), found: weights.len() });
    }
    for (g, &w) in sig.generators().iter().zip(weights) {
        if w < 0 {
            return Err(FiltrationError::NegativeWeight(g.name.clone()));
        }
        // 1 = gr(z) gr(z^-1) forces invertible generators into F_0.
        if g.kind == GeneratorKind::Laurent && w != 0 {
            return Err(FiltrationError::InvertibleNotDegreeZero(g.name.clone()));
        }
    }
    // With nonnegative weights the rewrite y x -> x y - 1 only lowers
    // weight, so F_i F_j ⊆ F_{i+j} holds for every Weyl pair.
    Ok(())
}

pub fn weight_degree(w: &WeightFiltration, f: &Element) -> Degree {
    w.weight_degree(f)
}

pub fn leading_form(w: &WeightFiltration, f: &Element) -> Result<Element, FiltrationError> {
    w.leading_form(f)
}

/// Filtration on `A ⊗ B` with `H_i = Σ_j F_j(A) ⊗ G_{i-j}(B)`: the
/// concatenated weight vector.
pub fn tensor_weights(a: &WeightFiltration, b: &WeightFiltration) -> Result<WeightFiltration, FiltrationError> {
    let sig = a.sig.tensor(&b.sig)?;
    let mut weights = a.weights.clone();
    weights.extend_from_slice(&b.weights);
    WeightFiltration::new(&sig, weights)
}

/// Dimension of a graded piece; infinite when a zero-weight generator is
/// free to appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradedDim {
    Finite(u64),
    Infinite,
}

impl Serialize for GradedDim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GradedDim::Finite(d) => s.serialize_u64(*d),
            GradedDim::Infinite => s.serialize_str("inf"),
        }
    }
}

impl GradedDim {
    fn add(self, o: GradedDim) -> GradedDim {
        match (self, o) {
            (GradedDim::Finite(a), GradedDim::Finite(b)) => GradedDim::Finite(a + b),
            _ => GradedDim::Infinite,
        }
    }

    fn mul(self, o: GradedDim) -> GradedDim {
        match (self, o) {
            (GradedDim::Finite(0), _) | (_, GradedDim::Finite(0)) => GradedDim::Finite(0),
            (GradedDim::Finite(a), GradedDim::Finite(b)) => GradedDim::Finite(a * b),
            _ => GradedDim::Infinite,
        }
    }
}

impl fmt::Display for GradedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedDim::Finite(d) => f.pad(&d.to_string()),
            GradedDim::Infinite => f.pad("inf"),
        }
    }
}

/// `dim gr_F(A)_i` for `i = 0..=cap`, by explicit enumeration of the
/// normal-form monomials of each weight. A zero-weight generator (every
/// invertible one included) can decorate any monomial, so every nonempty
/// piece is then infinite.
pub fn graded_dimensions(w: &WeightFiltration, cap: u32) -> Vec<GradedDim> {
    let weights = w.weights();
    let free_zero = weights.contains(&0);
    let positive: Vec<usize> = (0..weights.len()).filter(|&g| weights[g] > 0).collect();
    let mut counts = vec![0u64; cap as usize + 1];
    // Enumerate exponent vectors on positive-weight generators.
    fn rec(pos: usize, left: i64, gens: &[usize], weights: &[i64], used: i64, counts: &mut [u64]) {
        if pos == gens.len() {
            counts[used as usize] += 1;
            return;
        }
        let wt = weights[gens[pos]];
        let mut e = 0;
        while e * wt <= left {
            rec(pos + 1, left - e * wt, gens, weights, used + e * wt, counts);
            e += 1;
        }
    }
    rec(0, cap as i64, &positive, weights, 0, &mut counts);
    counts
        .into_iter()
        .map(|c| if c > 0 && free_zero { GradedDim::Infinite } else { GradedDim::Finite(c) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedRow {
    pub degree: u32,
    pub tensor: GradedDim,
    pub convolution: GradedDim,
    pub pass: bool,
}

/// Per-degree comparison of `dim gr_H(A⊗B)_i` against
/// `Σ_{a+b=i} dim gr_F(A)_a · dim gr_G(B)_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedReport {
    pub signature: String,
    pub weights: Vec<i64>,
    pub rows: Vec<GradedRow>,
    pub left: Vec<GradedDim>,
    pub right: Vec<GradedDim>,
}

impl GradedReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn gr_dimension_check(
    a: &WeightFiltration,
    b: &WeightFiltration,
    cap: u32,
) -> Result<GradedReport, FiltrationError> {
    let h = tensor_weights(a, b)?;
    let tensor = graded_dimensions(&h, cap);
    let left = graded_dimensions(a, cap);
    let right = graded_dimensions(b, cap);
    let rows = (0..=cap as usize)
        .map(|i| {
            let conv =
                (0..=i).map(|j| left[j].mul(right[i - j])).fold(GradedDim::Finite(0), |acc, d| acc.add(d));
            GradedRow { degree: i as u32, tensor: tensor[i], convolution: conv, pass: tensor[i] == conv }
        })
        .collect();
    Ok(GradedReport { signature: h.sig.to_string(), weights: h.weights.clone(), rows, left, right })
}

/// Dimension of the filtered piece `F_i`: number of nonnegative exponent
/// vectors of weight `<= i` (no invertible generators allowed).
pub fn filtered_dimension(w: &WeightFiltration, i: u32) -> GradedDim {
    graded_dimensions(w, i).into_iter().fold(GradedDim::Finite(0), |acc, d| acc.add(d))
}

/// Convenience: is `f` in `F_i`?
pub fn in_filtered_piece(w: &WeightFiltration, f: &Element, i: i64) -> bool {
    w.weight_degree(f) <= Degree::Finite(i)
}
