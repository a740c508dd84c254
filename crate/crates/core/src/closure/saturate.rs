//! Generic saturation: close a span under a finite pool of automorphisms,
//! truncated at a degree cap. Images above the cap are skipped (counted as
//! cap-blocked) rather than truncated, so every row is a genuine element of
//! the stable span. Each inserted image is recorded as a derivation step.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::closure::certificate::Derivation;
use crate::element::{Degree, Element};
use crate::family::{builtin_family, transposition, AutFamily};
use crate::linalg::{identity_matrix, Combination, SpanBasis};
use crate::monomial::{monomials_up_to, Monomial};
use crate::morphism::{MorphismError, ValidatedMap};
use crate::par::{self, Execution};
use crate::signature::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationStatus {
    Fixpoint,
    CapBlockedFixpoint,
    RoundLimit,
}

impl std::fmt::Display for SaturationStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SaturationStatus::Fixpoint => "fixpoint",
            SaturationStatus::CapBlockedFixpoint => "cap-blocked-fixpoint",
            SaturationStatus::RoundLimit => "round-limit",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Saturation {
    pub basis: SpanBasis,
    pub status: SaturationStatus,
    pub rounds: usize,
    /// Images skipped for exceeding the cap, over all rounds.
    pub blocked: usize,
    /// Seeds and pool applications; candidate `k` of `basis` is step `candidate_steps[k]`.
    pub derivation: Derivation,
    pub candidate_steps: Vec<usize>,
}

impl Saturation {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Replays the provenance of row `i`: every step it depends on, then
    /// the row as a combination of candidate steps.
    pub fn replay_row(&self, i: usize, pool: &[ValidatedMap]) -> Result<(), String> {
        let combo: &Combination = self.basis.row_provenance(i).ok_or(format!("no row {i}"))?;
        let row = self.basis.rows().nth(i).expect("row exists");
        let steps = self.derivation.steps();
        let mut needed = BTreeSet::new();
        let mut stack: Vec<usize> = combo.keys().map(|&k| self.candidate_steps[k]).collect();
        while let Some(s) = stack.pop() {
            if !needed.insert(s) {
                continue;
            }
            match &steps[s].kind {
                crate::closure::StepKind::Seed => {}
                crate::closure::StepKind::Apply { input, .. } => stack.push(*input),
                crate::closure::StepKind::Combine { inputs, .. } => stack.extend(inputs),
            }
        }
        for &s in &needed {
            self.derivation.replay_step(s, pool)?;
        }
        let mut acc = Element::zero(self.basis.signature());
        for (k, c) in combo {
            acc.add_scaled(c, self.derivation.result(self.candidate_steps[*k]));
        }
        if &acc != row {
            return Err(format!("row {i} is {row} but its provenance gives {acc}"));
        }
        Ok(())
    }
}

/// Saturates `span(seeds)` (seeds above the cap are dropped) under `pool`.
pub fn saturate(
    seeds: &[Element],
    pool: &[ValidatedMap],
    cap: u32,
    max_rounds: usize,
    exec: Execution,
) -> Saturation {
    let sig = seeds
        .first()
        .map(|s| s.signature().clone())
        .or_else(|| pool.first().map(|m| m.signature().clone()))
        .expect("at least one seed or pool map");
    let mut basis = SpanBasis::new(&sig, cap);
    let mut derivation = Derivation::new(&sig);
    let mut candidate_steps = Vec::new();
    let within = |f: &Element| f.total_degree() <= Degree::Finite(cap as i64);
    for s in seeds.iter().filter(|s| within(s)) {
        candidate_steps.push(derivation.seed(s.clone()));
        basis.insert(s).expect("seed within cap");
    }

    let mut blocked = 0;
    let mut rounds = 0;
    let status = loop {
        if rounds == max_rounds {
            break SaturationStatus::RoundLimit;
        }
        rounds += 1;
        let rows: Vec<Element> = basis.rows().cloned().collect();
        let combos: Vec<Combination> = (0..rows.len()).map(|i| basis.row_provenance(i).unwrap().clone()).collect();
        let jobs: Vec<(usize, usize)> = (0..pool.len()).flat_map(|k| (0..rows.len()).map(move |i| (k, i))).collect();
        let images = par::map(exec, &jobs, |&(k, i)| pool[k].apply(&rows[i]).expect("pool map on own signature"));

        let mut row_steps: Vec<Option<usize>> = vec![None; rows.len()];
        let mut grew = false;
        let mut round_blocked = 0;
        for (&(k, i), image) in jobs.iter().zip(images) {
            if !within(&image) {
                round_blocked += 1;
                continue;
            }
            if basis.contains(&image).expect("within cap") {
                continue;
            }
            let input = *row_steps[i].get_or_insert_with(|| {
                let terms: Vec<(usize, _)> =
                    combos[i].iter().map(|(c, v)| (candidate_steps[*c], v.clone())).collect();
                match terms.as_slice() {
                    [(s, v)] if v.is_one() => *s,
                    _ => derivation.combine(&terms),
                }
            });
            candidate_steps.push(derivation.record_pool_apply(k, input, image.clone()));
            basis.insert(&image).expect("within cap");
            grew = true;
        }
        blocked += round_blocked;
        if !grew {
            break if round_blocked > 0 { SaturationStatus::CapBlockedFixpoint } else { SaturationStatus::Fixpoint };
        }
    };
    Saturation { basis, status, rounds, blocked, derivation, candidate_steps }
}

pub const POOL_PRESETS: [&str; 3] = ["affine", "triangular", "weyl-standard"];

fn validated(sig: &Signature, fams: Vec<AutFamily>) -> Result<Vec<ValidatedMap>, MorphismError> {
    fams.iter().map(|f| builtin_family(sig, f)).collect()
}

fn affine_families(sig: &Signature) -> Vec<AutFamily> {
    let q = sig.field();
    let one = q.one();
    let two = q.from_i64(2);
    let mut fams: Vec<AutFamily> = sig
        .generators()
        .iter()
        .enumerate()
        .filter(|&(g, _)| !sig.is_laurent(g))
        .map(|(gen, _)| AutFamily::Shift { gen, by: one.clone() })
        .collect();
    if two.is_zero() {
        return fams;
    }
    let zs = sig.commutative_generators();
    for i in 0..zs.len() {
        let mut matrix = identity_matrix(q, zs.len());
        matrix[i][i] = two.clone();
        fams.push(AutFamily::Linear { matrix, translation: vec![q.zero(); zs.len()] });
    }
    for index in 0..sig.weyl_pairs().len() {
        fams.push(AutFamily::WeylScaling { index, factor: two.clone() });
    }
    fams
}

fn triangular_families(sig: &Signature, cap: u32) -> Vec<AutFamily> {
    let mut fams = affine_families(sig);
    let zs = sig.commutative_generators();
    let n = sig.generator_count();
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            fams.push(AutFamily::Permutation { perm: transposition(zs.len(), i, j) });
        }
    }
    for &g in zs.iter().filter(|&&g| !sig.is_laurent(g)) {
        // z_g -> z_g + m, m a monomial of degree 1..=cap in the other z's.
        for m in monomials_up_to(n, cap) {
            let other_z = (0..n).all(|h| m.exponent(h) == 0 || (h != g && zs.contains(&h)));
            if m.is_one() || !other_z {
                continue;
            }
            fams.push(AutFamily::Triangular { gen: g, addend: Element::monomial(sig, m) });
        }
    }
    fams
}

fn weyl_families(sig: &Signature, cap: u32) -> Vec<AutFamily> {
    let q = sig.field();
    let n = sig.weyl_pairs().len();
    let len = sig.generator_count();
    let mut fams = affine_families(sig);
    for i in 0..n {
        for j in i + 1..n {
            fams.push(AutFamily::WeylLinear { matrix: crate::family::permutation_matrix(sig, &transposition(n, i, j)) });
        }
        fams.push(AutFamily::WeylSwap { index: i });
        let x = sig.weyl_pairs()[i].x;
        for d in 0..=cap as i32 {
            let h = Element::monomial(sig, Monomial::one(len).with_exponent(x, d));
            fams.push(AutFamily::AlphaH { index: i, h });
        }
        fams.push(AutFamily::BetaIc { index: i, c: q.one() });
        if i + 1 < n {
            let mut matrix = identity_matrix(q, n);
            matrix[i][i + 1] = q.one();
            fams.push(AutFamily::WeylLinear { matrix });
        }
    }
    fams
}

/// Named pool of automorphisms for `sig`. `cap` bounds the degree of the
/// polynomial parameters (triangular addends, `h` in `y -> y + h(x)`).
pub fn pool_preset(sig: &Signature, name: &str, cap: u32) -> Result<Vec<ValidatedMap>, MorphismError> {
    let fams = match name {
        "affine" => affine_families(sig),
        "triangular" => triangular_families(sig, cap),
        "weyl-standard" => {
            if sig.weyl_pairs().is_empty() {
                return Err(MorphismError::Unsupported("weyl-standard pool needs a Weyl atom".into()));
            }
            weyl_families(sig, cap)
        }
        other => {
            return Err(MorphismError::Unsupported(format!(
                "unknown pool '{other}' (expected one of {})",
                POOL_PRESETS.join(", ")
            )))
        }
    };
    validated(sig, fams)
}

/// The preset used when none is named: weyl-standard when there is a Weyl
/// atom, triangular otherwise.
pub fn default_pool_name(sig: &Signature) -> &'static str {
    if sig.weyl_pairs().is_empty() {
        "triangular"
    } else {
        "weyl-standard"
    }
}
