//! Growth of `dim V^n` for a finite generating subspace and the
//! finite-difference degree detector used to read off GK dimension.

use serde::Serialize;
use thiserror::Error;

use crate::element::Element;
use crate::linalg::SpanBasis;
use crate::par::{self, Execution};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("generating subspace must contain 1")]
    NotContainingOne,
    #[error("sequence of length {len} too short to detect polynomial growth (no degree d with len >= 2(d+2) fits)")]
    SequenceTooShort { len: usize },
    #[error("generator from a different signature")]
    SignatureMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub dims: Vec<u64>,
    pub degree: Option<u32>,
    pub verdict: String,
}

/// `dims[n] = dim V^n` for `n = 0..=max_n`, with `V = span(gens) ∋ 1`.
pub fn growth_sequence(
    sig: &Signature,
    gens: &[Element],
    max_n: usize,
    exec: Execution,
) -> Result<GrowthReport, GrowthError> {
    if gens.iter().any(|g| g.signature() != sig) {
        return Err(GrowthError::SignatureMismatch);
    }
    // Degree cap large enough for every n-fold product.
    let top = gens.iter().filter_map(|g| g.total_degree().finite()).max().unwrap_or(0).max(0) as u32;
    let cap = top.saturating_mul(max_n as u32).max(1);
    let mut v = SpanBasis::new(sig, cap);
    for g in gens {
        v.insert(g).expect("degree within cap");
    }
    if !v.contains(&Element::one(sig)).expect("degree within cap") {
        return Err(GrowthError::NotContainingOne);
    }
    let v_rows: Vec<Element> = v.rows().cloned().collect();

    let mut current = SpanBasis::new(sig, cap);
    current.insert(&Element::one(sig)).expect("degree 0");
    let mut dims = vec![current.dim() as u64];
    for _ in 0..max_n {
        let rows: Vec<Element> = current.rows().cloned().collect();
        let pairs: Vec<(usize, usize)> =
            (0..rows.len()).flat_map(|i| (0..v_rows.len()).map(move |j| (i, j))).collect();
        let products = par::map(exec, &pairs, |&(i, j)| &rows[i] * &v_rows[j]);
        // Canonical (row, generator) insertion order.
        for p in &products {
            current.insert(p).expect("degree within cap");
        }
        dims.push(current.dim() as u64);
    }
    let degree = gk_estimate(&dims).ok();
    let verdict = match degree {
        Some(d) => format!("polynomial growth of degree {d}"),
        None => "undetermined".to_string(),
    };
    Ok(GrowthReport { dims, degree, verdict })
}

/// `1` together with every generator (and inverse of each invertible one).
pub fn standard_generating_set(sig: &Signature) -> Vec<Element> {
    let mut out = vec![Element::one(sig)];
    for g in 0..sig.generator_count() {
        let e = Element::generator(sig, g);
        if sig.is_laurent(g) {
            out.push(e.inverse_unit().expect("Laurent generator is a unit"));
        }
        out.push(e);
    }
    out
}

/// Smallest `d` whose `(d+1)`-th finite differences vanish on the last half
/// of `dims`.
pub fn gk_estimate(dims: &[u64]) -> Result<u32, GrowthError> {
    let tail: Vec<i128> = dims[dims.len() / 2..].iter().map(|&d| d as i128).collect();
    let mut diffs = tail;
    let mut d = 0u32;
    // Need len >= 2(d+2) for candidate d.
    while dims.len() >= 2 * (d as usize + 2) {
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        if !diffs.is_empty() && diffs.iter().all(|&x| x == 0) {
            return Ok(d);
        }
        d += 1;
    }
    Err(GrowthError::SequenceTooShort { len: dims.len() })
}
