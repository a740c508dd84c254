//! Exact linear algebra over the coefficient field: reduced echelon spans
//! of elements with tracked provenance, and small dense matrix inversion.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::element::{Degree, Element};
use crate::monomial::Monomial;
use crate::scalar::{Field, Scalar};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("element of degree {degree} exceeds cap {cap}")]
    DegreeExceedsCap { degree: i64, cap: u32 },
    #[error("element from a different signature")]
    SignatureMismatch,
}

/// Sparse coefficient vector over candidate indices.
pub type Combination = BTreeMap<usize, Scalar>;

fn add_scaled_combo(acc: &mut Combination, c: &Scalar, other: &Combination) {
    for (k, v) in other {
        let s = match acc.get(k) {
            Some(a) => a + &(c * v),
            None => c * v,
        };
        if s.is_zero() {
            acc.remove(k);
        } else {
            acc.insert(*k, s);
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    element: Element,
    combo: Combination,
}

/// Row-reduced basis of a subspace of the elements of total degree `<= cap`.
///
/// Each row has pivot coefficient 1 at its leading monomial and no other
/// row mentions that monomial. Every row also carries its expression as a
/// combination of the inserted candidates (numbered in insertion order).
#[derive(Debug, Clone)]
pub struct SpanBasis {
    sig: Signature,
    cap: u32,
    rows: BTreeMap<Monomial, Row>,
    inserted: usize,
}

impl SpanBasis {
    pub fn new(sig: &Signature, cap: u32) -> Self {
        SpanBasis { sig: sig.clone(), cap, rows: BTreeMap::new(), inserted: 0 }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows in ascending pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &Element> {
        self.rows.values().map(|r| &r.element)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    /// Combination of candidates equal to the `i`-th row.
    pub fn row_provenance(&self, i: usize) -> Option<&Combination> {
        self.rows.values().nth(i).map(|r| &r.combo)
    }

    pub fn candidates_inserted(&self) -> usize {
        self.inserted
    }

    fn check(&self, f: &Element) -> Result<(), LinalgError> {
        if f.signature() != &self.sig {
            return Err(LinalgError::SignatureMismatch);
        }
        if let Degree::Finite(d) = f.total_degree() {
            if d > self.cap as i64 {
                return Err(LinalgError::DegreeExceedsCap { degree: d, cap: self.cap });
            }
        }
        Ok(())
    }

    /// Residual of `f` modulo the span, with coordinates along the rows
    /// (ascending pivot order). The residual is zero iff `f` is in the span.
    pub fn reduce(&self, f: &Element) -> Result<(Element, Vec<Scalar>), LinalgError> {
        self.check(f)?;
        let mut residual = f.clone();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (pivot, row) in &self.rows {
            let c = f.coefficient(pivot);
            if !c.is_zero() {
                residual.add_scaled(&-&c, &row.element);
            }
            coords.push(c);
        }
        Ok((residual, coords))
    }

    pub fn contains(&self, f: &Element) -> Result<bool, LinalgError> {
        Ok(self.reduce(f)?.0.is_zero())
    }

    /// Expresses `f` as a combination of inserted candidates, if it lies in the span.
    pub fn express(&self, f: &Element) -> Result<Option<Combination>, LinalgError> {
        let (residual, coords) = self.reduce(f)?;
        if !residual.is_zero() {
            return Ok(None);
        }
        let mut combo = Combination::new();
        for (c, row) in coords.iter().zip(self.rows.values()) {
            if !c.is_zero() {
                add_scaled_combo(&mut combo, c, &row.combo);
            }
        }
        Ok(Some(combo))
    }

    /// Inserts a candidate; returns whether the dimension grew. The
    /// candidate gets the next index whether or not it was independent.
    pub fn insert(&mut self, f: &Element) -> Result<bool, LinalgError> {
        self.check(f)?;
        let id = self.inserted;
        self.inserted += 1;
        let mut residual = f.clone();
        let mut combo: Combination = [(id, self.sig.field().one())].into_iter().collect();
        for (pivot, row) in &self.rows {
            let c = f.coefficient(pivot);
            if !c.is_zero() {
                let neg = -&c;
                residual.add_scaled(&neg, &row.element);
                add_scaled_combo(&mut combo, &neg, &row.combo);
            }
        }
        let Some((pivot, lead)) = residual.leading_term().map(|(m, c)| (m.clone(), c.clone())) else {
            return Ok(false);
        };
        let inv = lead.inverse().expect("nonzero leading coefficient");
        let element = residual.scale(&inv);
        let combo: Combination = combo.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        for row in self.rows.values_mut() {
            let c = row.element.coefficient(&pivot);
            if !c.is_zero() {
                let neg = -&c;
                row.element.add_scaled(&neg, &element);
                add_scaled_combo(&mut row.combo, &neg, &combo);
            }
        }
        self.rows.insert(pivot, Row { element, combo });
        Ok(true)
    }
}

/// `reduce_against(basis, f)`: residual and coordinates.
pub fn reduce_against(basis: &SpanBasis, f: &Element) -> Result<(Element, Vec<Scalar>), LinalgError> {
    basis.reduce(f)
}

/// Gauss-Jordan inverse of a square matrix; `None` when singular.
pub fn invert_matrix(field: Field, m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "square matrix");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inverse().ok()?;
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&f * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let k = m.first().map_or(0, |r| r.len());
    (0..k).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn identity_matrix(field: Field, n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
}
