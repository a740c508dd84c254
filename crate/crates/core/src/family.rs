//! Named automorphism families with closed-form inverses.
//!
//! Commutative families (`Shift`, `Linear`, `Permutation`, `Triangular`)
//! act on the `z` generators of polynomial atoms. Weyl families act on the
//! Weyl pairs, numbered across all Weyl atoms. Indices are 0-based here and
//! 1-based in serialized form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::expr::{format_element, parse_element};
use crate::linalg::{invert_matrix, transpose};
use crate::monomial::Monomial;
use crate::morphism::{EndoMap, MorphismError, ValidatedMap};
use crate::scalar::Scalar;
use crate::signature::{GeneratorKind, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutFamily {
    /// `g -> g + by` on a non-invertible generator.
    Shift { gen: usize, by: Scalar },
    /// Affine map `z -> M z + t` on the commutative generators.
    Linear { matrix: Vec<Vec<Scalar>>, translation: Vec<Scalar> },
    /// `z_i -> z_perm[i]` on the commutative generators.
    Permutation { perm: Vec<usize> },
    /// `g -> g + addend` with `addend` free of `g`.
    Triangular { gen: usize, addend: Element },
    /// `x_i -> c x_i`, `y_i -> c^-1 y_i`.
    WeylScaling { index: usize, factor: Scalar },
    /// `x_i -> Σ m_ij x_j`, `y_k -> Σ n_kl y_l` with `N = (M^-1)^T`.
    WeylLinear { matrix: Vec<Vec<Scalar>> },
    /// `x_i -> y_i`, `y_i -> -x_i`.
    WeylSwap { index: usize },
    /// `y_i -> y_i + h(x_i)`.
    AlphaH { index: usize, h: Element },
    /// `x_i -> x_i + c y_i`.
    BetaIc { index: usize, c: Scalar },
    /// An automorphism of one atom, identity on the others. The inner
    /// family is expressed in the atom's own signature.
    TensorLift { atom: usize, inner: Box<AutFamily> },
}

impl AutFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            AutFamily::Shift { .. } => "shift",
            AutFamily::Linear { .. } => "linear",
            AutFamily::Permutation { .. } => "permutation",
            AutFamily::Triangular { .. } => "triangular",
            AutFamily::WeylScaling { .. } => "weyl-scaling",
            AutFamily::WeylLinear { .. } => "weyl-linear",
            AutFamily::WeylSwap { .. } => "weyl-swap",
            AutFamily::AlphaH { .. } => "alpha-h",
            AutFamily::BetaIc { .. } => "beta-ic",
            AutFamily::TensorLift { .. } => "tensor-lift",
        }
    }
}

fn out_of_range(what: &str, i: usize, n: usize) -> MorphismError {
    MorphismError::IndexOutOfRange(format!("{what} {} (have {n})", i + 1))
}

fn identity_images(sig: &Signature) -> BTreeMap<usize, Element> {
    (0..sig.generator_count()).map(|g| (g, Element::generator(sig, g))).collect()
}

fn linear_form(sig: &Signature, gens: &[usize], row: &[Scalar], constant: &Scalar) -> Element {
    let mut e = Element::scalar(sig, constant.clone());
    for (g, c) in gens.iter().zip(row) {
        e.add_scaled(c, &Element::generator(sig, *g));
    }
    e
}

fn check_square(m: &[Vec<Scalar>], n: usize) -> Result<(), MorphismError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(MorphismError::IndexOutOfRange(format!("matrix must be {n}x{n}")));
    }
    Ok(())
}

/// Builds and validates the named automorphism, inverse images included.
pub fn builtin_family(sig: &Signature, family: &AutFamily) -> Result<ValidatedMap, MorphismError> {
    let (images, inverse) = family_images(sig, family)?;
    let name = family.tag().to_string();
    EndoMap::new(name, sig, images).with_inverse(inverse).with_family(family.clone()).validate()
}

type Images = BTreeMap<usize, Element>;

fn family_images(sig: &Signature, family: &AutFamily) -> Result<(Images, Images), MorphismError> {
    let field = sig.field();
    let zs = sig.commutative_generators();
    let pairs = sig.weyl_pairs().to_vec();
    let mut fwd = identity_images(sig);
    let mut inv = identity_images(sig);
    let gen_el = |g: usize| Element::generator(sig, g);
    let pair = |i: usize| pairs.get(i).ok_or_else(|| out_of_range("Weyl index", i, pairs.len()));
    match family {
        AutFamily::Shift { gen, by } => {
            if *gen >= sig.generator_count() {
                return Err(out_of_range("generator", *gen, sig.generator_count()));
            }
            if sig.is_laurent(*gen) {
                return Err(MorphismError::Unsupported("cannot shift an invertible generator".into()));
            }
            fwd.insert(*gen, &gen_el(*gen) + &Element::scalar(sig, by.clone()));
            inv.insert(*gen, &gen_el(*gen) - &Element::scalar(sig, by.clone()));
        }
        AutFamily::Linear { matrix, translation } => {
            check_square(matrix, zs.len())?;
            if translation.len() != zs.len() {
                return Err(MorphismError::IndexOutOfRange(format!("translation must have {} entries", zs.len())));
            }
            let minv = invert_matrix(field, matrix).ok_or(MorphismError::SingularMatrix)?;
            // inverse: z -> M^-1 z - M^-1 t
            let back_t: Vec<Scalar> = minv
                .iter()
                .map(|row| {
                    let s = row.iter().zip(translation).fold(field.zero(), |acc, (a, b)| &acc + &(a * b));
                    -s
                })
                .collect();
            for (i, &g) in zs.iter().enumerate() {
                fwd.insert(g, linear_form(sig, &zs, &matrix[i], &translation[i]));
                inv.insert(g, linear_form(sig, &zs, &minv[i], &back_t[i]));
            }
        }
        AutFamily::Permutation { perm } => {
            let n = zs.len();
            let mut seen = vec![false; n];
            if perm.len() != n {
                return Err(MorphismError::IndexOutOfRange(format!("permutation must have {n} entries")));
            }
            for &p in perm {
                if p >= n || seen[p] {
                    return Err(MorphismError::IndexOutOfRange(format!("not a permutation of 1..{n}")));
                }
                seen[p] = true;
            }
            for (i, &p) in perm.iter().enumerate() {
                fwd.insert(zs[i], gen_el(zs[p]));
                inv.insert(zs[p], gen_el(zs[i]));
            }
        }
        AutFamily::Triangular { gen, addend } => {
            if *gen >= sig.generator_count() {
                return Err(out_of_range("generator", *gen, sig.generator_count()));
            }
            if sig.is_laurent(*gen) {
                return Err(MorphismError::Unsupported("cannot translate an invertible generator".into()));
            }
            if addend.signature() != sig {
                return Err(MorphismError::BadPolynomial("addend from another signature".into()));
            }
            if addend.terms().any(|(m, _)| m.exponent(*gen) != 0) {
                return Err(MorphismError::BadPolynomial(format!(
                    "addend involves {}",
                    sig.generators()[*gen].name
                )));
            }
            fwd.insert(*gen, &gen_el(*gen) + addend);
            inv.insert(*gen, &gen_el(*gen) - addend);
        }
        AutFamily::WeylScaling { index, factor } => {
            let p = pair(*index)?;
            let finv = factor.inverse().map_err(|_| MorphismError::SingularMatrix)?;
            fwd.insert(p.x, gen_el(p.x).scale(factor));
            fwd.insert(p.y, gen_el(p.y).scale(&finv));
            inv.insert(p.x, gen_el(p.x).scale(&finv));
            inv.insert(p.y, gen_el(p.y).scale(factor));
        }
        AutFamily::WeylLinear { matrix } => {
            check_square(matrix, pairs.len())?;
            let minv = invert_matrix(field, matrix).ok_or(MorphismError::SingularMatrix)?;
            let n_fwd = transpose(&minv);
            let n_inv = transpose(matrix);
            let xs: Vec<usize> = pairs.iter().map(|p| p.x).collect();
            let ys: Vec<usize> = pairs.iter().map(|p| p.y).collect();
            let zero = field.zero();
            for i in 0..pairs.len() {
                fwd.insert(xs[i], linear_form(sig, &xs, &matrix[i], &zero));
                fwd.insert(ys[i], linear_form(sig, &ys, &n_fwd[i], &zero));
                inv.insert(xs[i], linear_form(sig, &xs, &minv[i], &zero));
                inv.insert(ys[i], linear_form(sig, &ys, &n_inv[i], &zero));
            }
        }
        AutFamily::WeylSwap { index } => {
            let p = pair(*index)?;
            fwd.insert(p.x, gen_el(p.y));
            fwd.insert(p.y, -&gen_el(p.x));
            inv.insert(p.x, -&gen_el(p.y));
            inv.insert(p.y, gen_el(p.x));
        }
        AutFamily::AlphaH { index, h } => {
            let p = *pair(*index)?;
            if h.signature() != sig {
                return Err(MorphismError::BadPolynomial("h from another signature".into()));
            }
            if let Some((m, _)) = h.terms().find(|(m, _)| (0..m.len()).any(|g| g != p.x && m.exponent(g) != 0)) {
                return Err(MorphismError::BadPolynomial(format!(
                    "h must be a polynomial in {} only, found term {}",
                    sig.generators()[p.x].name,
                    crate::expr::format_monomial(sig, m)
                )));
            }
            fwd.insert(p.y, &gen_el(p.y) + h);
            inv.insert(p.y, &gen_el(p.y) - h);
        }
        AutFamily::BetaIc { index, c } => {
            let p = pair(*index)?;
            fwd.insert(p.x, &gen_el(p.x) + &gen_el(p.y).scale(c));
            inv.insert(p.x, &gen_el(p.x) - &gen_el(p.y).scale(c));
        }
        AutFamily::TensorLift { atom, inner } => {
            if *atom >= sig.atoms().len() {
                return Err(out_of_range("atom", *atom, sig.atoms().len()));
            }
            let sub = sig.atom_signature(*atom);
            let offset = sig.atom_range(*atom).start;
            let (ifwd, iinv) = family_images(&sub, inner)?;
            let embed = |e: &Element| embed_element(sig, offset, e);
            for (g, e) in ifwd {
                fwd.insert(offset + g, embed(&e));
            }
            for (g, e) in iinv {
                inv.insert(offset + g, embed(&e));
            }
        }
    }
    Ok((fwd, inv))
}

fn embed_element(sig: &Signature, offset: usize, e: &Element) -> Element {
    let n = sig.generator_count();
    let terms = e.terms().map(|(m, c)| {
        let mut v = vec![0; n];
        v[offset..offset + m.len()].copy_from_slice(m.exponents());
        (Monomial::from_exponents(v), c.clone())
    });
    Element::from_terms(sig, terms).expect("embedding preserves exponent signs")
}

/// Serialized family parameters: tag plus named fields, scalars and
/// elements as canonical expression strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Shift { generator: String, by: String },
    Linear { matrix: Vec<Vec<String>>, translation: Vec<String> },
    Permutation { perm: Vec<usize> },
    Triangular { generator: String, addend: String },
    WeylScaling { index: usize, factor: String },
    WeylLinear { matrix: Vec<Vec<String>> },
    WeylSwap { index: usize },
    AlphaH { index: usize, h: String },
    BetaIc { index: usize, c: String },
    TensorLift { atom: usize, inner: Box<FamilySpec> },
}

fn scalars_out(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn matrix_out(m: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    m.iter().map(|r| scalars_out(r)).collect()
}

impl AutFamily {
    pub fn to_spec(&self, sig: &Signature) -> FamilySpec {
        let name = |g: usize| sig.generators()[g].name.clone();
        match self {
            AutFamily::Shift { gen, by } => FamilySpec::Shift { generator: name(*gen), by: by.to_string() },
            AutFamily::Linear { matrix, translation } => {
                FamilySpec::Linear { matrix: matrix_out(matrix), translation: scalars_out(translation) }
            }
            AutFamily::Permutation { perm } => FamilySpec::Permutation { perm: perm.iter().map(|p| p + 1).collect() },
            AutFamily::Triangular { gen, addend } => {
                FamilySpec::Triangular { generator: name(*gen), addend: format_element(addend) }
            }
            AutFamily::WeylScaling { index, factor } => {
                FamilySpec::WeylScaling { index: index + 1, factor: factor.to_string() }
            }
            AutFamily::WeylLinear { matrix } => FamilySpec::WeylLinear { matrix: matrix_out(matrix) },
            AutFamily::WeylSwap { index } => FamilySpec::WeylSwap { index: index + 1 },
            AutFamily::AlphaH { index, h } => FamilySpec::AlphaH { index: index + 1, h: format_element(h) },
            AutFamily::BetaIc { index, c } => FamilySpec::BetaIc { index: index + 1, c: c.to_string() },
            AutFamily::TensorLift { atom, inner } => {
                FamilySpec::TensorLift { atom: atom + 1, inner: Box::new(inner.to_spec(&sig.atom_signature(*atom))) }
            }
        }
    }
}

impl FamilySpec {
    pub fn to_family(&self, sig: &Signature) -> Result<AutFamily, MorphismError> {
        let field = sig.field();
        let scalar = |t: &str| field.parse_scalar(t).map_err(|e| MorphismError::BadPolynomial(format!("{t}: {e}")));
        let scalars = |v: &[String]| v.iter().map(|t| scalar(t)).collect::<Result<Vec<_>, _>>();
        let matrix = |m: &[Vec<String>]| m.iter().map(|r| scalars(r)).collect::<Result<Vec<_>, _>>();
        let gen = |n: &str| {
            sig.generator_index(n).ok_or_else(|| MorphismError::IndexOutOfRange(format!("unknown generator {n}")))
        };
        let element = |t: &str| parse_element(t, sig).map_err(|e| MorphismError::BadPolynomial(format!("{t}: {e}")));
        let index = |i: usize| {
            i.checked_sub(1).ok_or_else(|| MorphismError::IndexOutOfRange("indices start at 1".into()))
        };
        Ok(match self {
            FamilySpec::Shift { generator, by } => AutFamily::Shift { gen: gen(generator)?, by: scalar(by)? },
            FamilySpec::Linear { matrix: m, translation } => {
                AutFamily::Linear { matrix: matrix(m)?, translation: scalars(translation)? }
            }
            FamilySpec::Permutation { perm } => {
                AutFamily::Permutation { perm: perm.iter().map(|&p| index(p)).collect::<Result<_, _>>()? }
            }
            FamilySpec::Triangular { generator, addend } => {
                AutFamily::Triangular { gen: gen(generator)?, addend: element(addend)? }
            }
            FamilySpec::WeylScaling { index: i, factor } => {
                AutFamily::WeylScaling { index: index(*i)?, factor: scalar(factor)? }
            }
            FamilySpec::WeylLinear { matrix: m } => AutFamily::WeylLinear { matrix: matrix(m)? },
            FamilySpec::WeylSwap { index: i } => AutFamily::WeylSwap { index: index(*i)? },
            FamilySpec::AlphaH { index: i, h } => AutFamily::AlphaH { index: index(*i)?, h: element(h)? },
            FamilySpec::BetaIc { index: i, c } => AutFamily::BetaIc { index: index(*i)?, c: scalar(c)? },
            FamilySpec::TensorLift { atom, inner } => {
                let a = index(*atom)?;
                if a >= sig.atoms().len() {
                    return Err(out_of_range("atom", a, sig.atoms().len()));
                }
                AutFamily::TensorLift { atom: a, inner: Box::new(inner.to_family(&sig.atom_signature(a))?) }
            }
        })
    }
}

/// Permutation matrix sending pair `i` to pair `perm[i]`, for use with
/// `WeylLinear`.
pub fn permutation_matrix(sig: &Signature, perm: &[usize]) -> Vec<Vec<Scalar>> {
    let f = sig.field();
    perm.iter().map(|&p| (0..perm.len()).map(|j| if j == p { f.one() } else { f.zero() }).collect()).collect()
}

/// Transposition `i <-> j` on `n` letters.
pub fn transposition(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(i, j);
    p
}

/// Generators a shift can move (everything but Laurent generators).
pub fn shiftable_generators(sig: &Signature) -> Vec<usize> {
    (0..sig.generator_count()).filter(|&g| sig.generators()[g].kind != GeneratorKind::Laurent).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn a1() -> Signature {
        Signature::weyl(1, Field::Rational)
    }

    fn el(s: &Signature, t: &str) -> Element {
        parse_element(t, s).unwrap()
    }

    #[test]
    fn identity_weyl_linear() {
        let s = Signature::weyl(2, Field::Rational);
        let m = builtin_family(&s, &AutFamily::WeylLinear { matrix: crate::linalg::identity_matrix(s.field(), 2) })
            .unwrap();
        for g in 0..4 {
            assert_eq!(m.image(g), &Element::generator(&s, g));
        }
    }

    #[test]
    fn weyl_linear_scalar_matches_scaling() {
        let s = a1();
        let two = s.field().from_i64(2);
        let lin = builtin_family(&s, &AutFamily::WeylLinear { matrix: vec![vec![two.clone()]] }).unwrap();
        let sc = builtin_family(&s, &AutFamily::WeylScaling { index: 0, factor: two }).unwrap();
        assert_eq!(lin.image(0), &el(&s, "2*x1"));
        assert_eq!(lin.image(1), &el(&s, "1/2*y1"));
        assert_eq!(lin.image(1), sc.image(1));
        assert_eq!(lin.apply(&el(&s, "x1*y1")).unwrap(), el(&s, "x1*y1"));
    }

    #[test]
    fn beta_images() {
        let s = a1();
        let m = builtin_family(&s, &AutFamily::BetaIc { index: 0, c: s.field().from_i64(3) }).unwrap();
        assert_eq!(m.image(0), &el(&s, "x1 + 3*y1"));
        assert_eq!(m.image(1), &el(&s, "y1"));
    }

    #[test]
    fn alpha_difference() {
        let s = a1();
        let m = builtin_family(&s, &AutFamily::AlphaH { index: 0, h: el(&s, "x1^2") }).unwrap();
        assert_eq!(m.apply(&el(&s, "x1*y1")).unwrap(), el(&s, "x1*y1 + x1^3"));
        let bad = builtin_family(&s, &AutFamily::AlphaH { index: 0, h: el(&s, "y1") });
        assert!(matches!(bad, Err(MorphismError::BadPolynomial(_))));
    }

    #[test]
    fn differences_from_the_proofs() {
        let p = Signature::poly(2, Field::Rational);
        let tau = builtin_family(&p, &AutFamily::Triangular { gen: 1, addend: el(&p, "z1^3") }).unwrap();
        assert_eq!(tau.difference(&el(&p, "z2")).unwrap(), el(&p, "z1^3"));
        let s = a1();
        let sc = builtin_family(&s, &AutFamily::WeylScaling { index: 0, factor: s.field().from_i64(2) }).unwrap();
        assert_eq!(sc.difference(&el(&s, "x1 + y1")).unwrap(), el(&s, "x1 - 1/2*y1"));
    }

    #[test]
    fn singular_and_out_of_range() {
        let p = Signature::poly(2, Field::Rational);
        let q = p.field();
        let sing = vec![vec![q.one(), q.one()], vec![q.one(), q.one()]];
        assert_eq!(
            builtin_family(&p, &AutFamily::Linear { matrix: sing, translation: vec![q.zero(), q.zero()] }).unwrap_err(),
            MorphismError::SingularMatrix
        );
        assert!(matches!(
            builtin_family(&a1(), &AutFamily::WeylSwap { index: 3 }),
            Err(MorphismError::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn tensor_lift_embeds() {
        let c = Signature::parse("poly:1 x weyl:1", Field::Rational).unwrap();
        let lift = AutFamily::TensorLift { atom: 1, inner: Box::new(AutFamily::WeylSwap { index: 0 }) };
        let m = builtin_family(&c, &lift).unwrap();
        assert_eq!(m.apply(&el(&c, "z1*x1")).unwrap(), el(&c, "z1*y1"));
        let spec = lift.to_spec(&c);
        assert_eq!(spec.to_family(&c).unwrap(), lift);
    }

    #[test]
    fn spec_round_trip() {
        let p = Signature::poly(2, Field::Rational);
        let q = p.field();
        let fam = AutFamily::Linear {
            matrix: vec![vec![q.parse_scalar("1/2").unwrap(), q.zero()], vec![q.zero(), q.one()]],
            translation: vec![q.parse_scalar("-1/2").unwrap(), q.zero()],
        };
        let json = serde_json::to_string(&fam.to_spec(&p)).unwrap();
        assert_eq!(json, r#"{"family":"linear","matrix":[["1/2","0"],["0","1"]],"translation":["-1/2","0"]}"#);
        let back: FamilySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_family(&p).unwrap(), fam);
        let m = builtin_family(&p, &fam).unwrap();
        assert_eq!(m.apply(&el(&p, "2*z1 + 1")).unwrap(), el(&p, "z1"));
    }
}
