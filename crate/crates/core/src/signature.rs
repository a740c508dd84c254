//! Algebra signatures: ordered tensor products of polynomial, Laurent and
//! Weyl atoms over a fixed coefficient field.
//!
//! Generators are laid out atom by atom. A `Poly(m)` or `Laurent(m)` atom
//! contributes `m` commuting generators named `z<k>`; a `Weyl(n)` atom
//! contributes `x<k>..` followed by `y<k>..`, so the exponent vector of a
//! normal-form monomial reads `x^a y^b` per Weyl index. Indices continue
//! across atoms of the same letter family.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::{Field, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("empty algebra description")]
    Empty,
    #[error("unknown atom `{0}` (expected poly:<m>, laurent:<m> or weyl:<n>)")]
    UnknownAtom(String),
    #[error("atom `{0}` must have at least one generator")]
    ZeroSize(String),
    #[error("unknown field `{0}` (expected q or f<p>)")]
    UnknownField(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("cannot tensor signatures over different fields")]
    FieldMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Poly(usize),
    Laurent(usize),
    Weyl(usize),
}

impl Atom {
    pub fn generator_count(self) -> usize {
        match self {
            Atom::Poly(m) | Atom::Laurent(m) => m,
            Atom::Weyl(n) => 2 * n,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Poly(m) => write!(f, "poly:{m}"),
            Atom::Laurent(m) => write!(f, "laurent:{m}"),
            Atom::Weyl(n) => write!(f, "weyl:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Commutative,
    Laurent,
    /// `x` of the Weyl pair with the given index into [`Signature::weyl_pairs`].
    WeylX(usize),
    WeylY(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
    pub atom: usize,
}

/// A canonically conjugate pair `x, y` with `xy - yx = 1`, unless `graded`
/// is set, in which case the pair commutes (its image in an associated
/// graded ring).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylPair {
    pub x: usize,
    pub y: usize,
    pub graded: bool,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Inner {
    atoms: Vec<Atom>,
    field: Field,
    generators: Vec<Generator>,
    pairs: Vec<WeylPair>,
    ranges: Vec<Range<usize>>,
}

/// Shared, immutable algebra description. Cloning is cheap.
#[derive(Clone)]
pub struct Signature(Arc<Inner>);

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Signature {}

impl std::hash::Hash for Signature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({self} over {})", self.field())
    }
}

impl Signature {
    pub fn new(atoms: Vec<Atom>, field: Field) -> Result<Self, SignatureError> {
        if atoms.is_empty() {
            return Err(SignatureError::Empty);
        }
        if let Some(a) = atoms.iter().find(|a| a.generator_count() == 0) {
            return Err(SignatureError::ZeroSize(a.to_string()));
        }
        Ok(Self::build(atoms, field, None))
    }

    pub fn poly(m: usize, field: Field) -> Self {
        Self::new(vec![Atom::Poly(m)], field).expect("m > 0")
    }

    pub fn laurent(m: usize, field: Field) -> Self {
        Self::new(vec![Atom::Laurent(m)], field).expect("m > 0")
    }

    pub fn weyl(n: usize, field: Field) -> Self {
        Self::new(vec![Atom::Weyl(n)], field).expect("n > 0")
    }

    fn build(atoms: Vec<Atom>, field: Field, graded: Option<&[bool]>) -> Self {
        let mut generators = Vec::new();
        let mut pairs = Vec::new();
        let mut ranges = Vec::new();
        let (mut z, mut w) = (0usize, 0usize);
        for (ai, atom) in atoms.iter().enumerate() {
            let start = generators.len();
            match *atom {
                Atom::Poly(m) | Atom::Laurent(m) => {
                    let kind =
                        if matches!(atom, Atom::Poly(_)) { GeneratorKind::Commutative } else { GeneratorKind::Laurent };
                    for _ in 0..m {
                        z += 1;
                        generators.push(Generator { name: format!("z{z}"), kind, atom: ai });
                    }
                }
                Atom::Weyl(n) => {
                    let first_pair = pairs.len();
                    for i in 0..n {
                        let p = first_pair + i;
                        generators.push(Generator {
                            name: format!("x{}", w + i + 1),
                            kind: GeneratorKind::WeylX(p),
                            atom: ai,
                        });
                    }
                    for i in 0..n {
                        let p = first_pair + i;
                        generators.push(Generator {
                            name: format!("y{}", w + i + 1),
                            kind: GeneratorKind::WeylY(p),
                            atom: ai,
                        });
                        let flag = graded.map(|g| g[p]).unwrap_or(false);
                        pairs.push(WeylPair { x: start + i, y: start + n + i, graded: flag });
                    }
                    w += n;
                }
            }
            ranges.push(start..generators.len());
        }
        Signature(Arc::new(Inner { atoms, field, generators, pairs, ranges }))
    }

    /// Parses `poly:2`, `weyl:1`, `poly:1 x weyl:1`, ...
    pub fn parse(text: &str, field: Field) -> Result<Self, SignatureError> {
        let mut atoms = Vec::new();
        for part in text.split('⊗').flat_map(|p| p.split(" x ")) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (kind, size) = part.split_once(':').ok_or_else(|| SignatureError::UnknownAtom(part.into()))?;
            let size: usize = size.trim().parse().map_err(|_| SignatureError::UnknownAtom(part.into()))?;
            atoms.push(match kind.trim() {
                "poly" => Atom::Poly(size),
                "laurent" => Atom::Laurent(size),
                "weyl" => Atom::Weyl(size),
                _ => return Err(SignatureError::UnknownAtom(part.into())),
            });
        }
        Self::new(atoms, field)
    }

    pub fn parse_field(text: &str) -> Result<Field, SignatureError> {
        let t = text.trim().to_ascii_lowercase();
        if t == "q" {
            return Ok(Field::Rational);
        }
        match t.strip_prefix('f').and_then(|p| p.parse::<u64>().ok()) {
            Some(p) => Ok(Field::prime(p)?),
            None => Err(SignatureError::UnknownField(text.into())),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0.atoms
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.generators
    }

    pub fn generator_count(&self) -> usize {
        self.0.generators.len()
    }

    pub fn weyl_pairs(&self) -> &[WeylPair] {
        &self.0.pairs
    }

    pub fn atom_range(&self, atom: usize) -> Range<usize> {
        self.0.ranges[atom].clone()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.0.generators.iter().position(|g| g.name == name)
    }

    pub fn is_laurent(&self, gen: usize) -> bool {
        self.0.generators[gen].kind == GeneratorKind::Laurent
    }

    /// Indices of non-invertible commuting generators (`z` of polynomial atoms).
    pub fn commutative_generators(&self) -> Vec<usize> {
        self.indices_where(|k| k == GeneratorKind::Commutative)
    }

    pub fn x_generators(&self) -> Vec<usize> {
        self.0.pairs.iter().map(|p| p.x).collect()
    }

    pub fn y_generators(&self) -> Vec<usize> {
        self.0.pairs.iter().map(|p| p.y).collect()
    }

    fn indices_where(&self, pred: impl Fn(GeneratorKind) -> bool) -> Vec<usize> {
        self.0.generators.iter().enumerate().filter(|(_, g)| pred(g.kind)).map(|(i, _)| i).collect()
    }

    /// Every atom is a polynomial ring (so the whole algebra is one).
    pub fn is_polynomial(&self) -> bool {
        self.atoms().iter().all(|a| matches!(a, Atom::Poly(_)))
    }

    /// Every atom is a Weyl algebra, none of them graded.
    pub fn is_weyl(&self) -> bool {
        self.atoms().iter().all(|a| matches!(a, Atom::Weyl(_))) && self.0.pairs.iter().all(|p| !p.graded)
    }

    pub fn is_graded_pair(&self, pair: usize) -> bool {
        self.0.pairs[pair].graded
    }

    /// Expected value of `g_a g_b - g_b g_a` for generators `a`, `b`:
    /// `Some(1)` for `(x_i, y_i)`, `Some(-1)` for `(y_i, x_i)`, `Some(0)` otherwise.
    pub fn commutator_constant(&self, a: usize, b: usize) -> i64 {
        for p in &self.0.pairs {
            if p.graded {
                continue;
            }
            if (a, b) == (p.x, p.y) {
                return 1;
            }
            if (a, b) == (p.y, p.x) {
                return -1;
            }
        }
        0
    }

    /// Same atoms with the given Weyl pairs marked commutative.
    pub fn with_graded_pairs(&self, graded: &[bool]) -> Self {
        assert_eq!(graded.len(), self.0.pairs.len());
        Self::build(self.0.atoms.clone(), self.0.field, Some(graded))
    }

    /// Concatenation of atoms, `self ⊗ other`.
    pub fn tensor(&self, other: &Signature) -> Result<Self, SignatureError> {
        if self.field() != other.field() {
            return Err(SignatureError::FieldMismatch);
        }
        let mut atoms = self.0.atoms.clone();
        atoms.extend_from_slice(&other.0.atoms);
        let flags: Vec<bool> = self.0.pairs.iter().chain(other.0.pairs.iter()).map(|p| p.graded).collect();
        Ok(Self::build(atoms, self.field(), Some(&flags)))
    }

    /// Signature of a single atom, with atom-local generator names.
    pub fn atom_signature(&self, atom: usize) -> Self {
        let first_pair = self.0.pairs.iter().position(|p| self.0.generators[p.x].atom == atom);
        let flags: Vec<bool> = match (self.0.atoms[atom], first_pair) {
            (Atom::Weyl(n), Some(fp)) => self.0.pairs[fp..fp + n].iter().map(|p| p.graded).collect(),
            _ => Vec::new(),
        };
        Self::build(vec![self.0.atoms[atom]], self.field(), Some(&flags))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" x ");
        if self.0.pairs.iter().any(|p| p.graded) {
            write!(f, "gr({body})")
        } else {
            write!(f, "{body}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_naming_offsets_across_atoms() {
        let s = Signature::parse("poly:1 x weyl:1 x poly:1 x weyl:1", Field::Rational).unwrap();
        let names: Vec<_> = s.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["z1", "x1", "y1", "z2", "x2", "y2"]);
        assert_eq!(s.weyl_pairs().len(), 2);
        assert_eq!(s.commutator_constant(1, 2), 1);
        assert_eq!(s.commutator_constant(5, 4), -1);
        assert_eq!(s.commutator_constant(1, 5), 0);
        assert_eq!(s.to_string(), "poly:1 x weyl:1 x poly:1 x weyl:1");
    }

    #[test]
    fn weyl_layout_is_x_then_y() {
        let s = Signature::weyl(2, Field::Rational);
        let names: Vec<_> = s.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["x1", "x2", "y1", "y2"]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Signature::parse("", Field::Rational), Err(SignatureError::Empty)));
        assert!(matches!(Signature::parse("free:2", Field::Rational), Err(SignatureError::UnknownAtom(_))));
        assert!(matches!(Signature::parse("poly:0", Field::Rational), Err(SignatureError::ZeroSize(_))));
        assert!(matches!(Signature::parse_field("f4"), Err(SignatureError::Scalar(_))));
        assert_eq!(Signature::parse_field("F2").unwrap(), Field::Prime(2));
    }

    #[test]
    fn atom_signature_restarts_names() {
        let s = Signature::parse("weyl:1 x weyl:2", Field::Rational).unwrap();
        let a = s.atom_signature(1);
        assert_eq!(a, Signature::weyl(2, Field::Rational));
    }
}
