//! Replayable derivations, closure certificates, their canonical JSON form,
//! and the verifier.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::element::{combine, Element};
use crate::expr::{format_element, format_monomial, parse_element};
use crate::family::{builtin_family, AutFamily, FamilySpec};
use crate::monomial::{monomials_up_to, Monomial};
use crate::morphism::{MorphismError, ValidatedMap};
use crate::par::{self, Execution};
use crate::scalar::Scalar;
use crate::signature::Signature;

pub const SCHEMA_VERSION: u32 = 1;

/// The automorphism an `Apply` step uses: a named family (serializable) or
/// an entry of an in-memory pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapRef {
    Family(AutFamily),
    Pool(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Seed,
    Apply { map: MapRef, input: usize },
    Combine { inputs: Vec<usize>, coeffs: Vec<Scalar> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertStep {
    pub id: usize,
    pub kind: StepKind,
    pub result: Element,
}

/// Append-only list of steps, each computed from earlier ones.
#[derive(Debug, Clone)]
pub struct Derivation {
    sig: Signature,
    steps: Vec<CertStep>,
}

impl Derivation {
    pub fn new(sig: &Signature) -> Self {
        Derivation { sig: sig.clone(), steps: Vec::new() }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn steps(&self) -> &[CertStep] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<CertStep> {
        self.steps
    }

    pub fn result(&self, id: usize) -> &Element {
        &self.steps[id].result
    }

    fn push(&mut self, kind: StepKind, result: Element) -> usize {
        let id = self.steps.len();
        self.steps.push(CertStep { id, kind, result });
        id
    }

    pub fn seed(&mut self, e: Element) -> usize {
        self.push(StepKind::Seed, e)
    }

    pub fn apply_family(&mut self, family: AutFamily, input: usize) -> Result<usize, MorphismError> {
        let map = builtin_family(&self.sig, &family)?;
        let result = map.apply(self.result(input))?;
        Ok(self.push(StepKind::Apply { map: MapRef::Family(family), input }, result))
    }

    pub fn apply_pool(&mut self, pool_index: usize, map: &ValidatedMap, input: usize) -> Result<usize, MorphismError> {
        let result = map.apply(self.result(input))?;
        Ok(self.record_pool_apply(pool_index, input, result))
    }

    pub(crate) fn record_pool_apply(&mut self, pool_index: usize, input: usize, result: Element) -> usize {
        self.push(StepKind::Apply { map: MapRef::Pool(pool_index), input }, result)
    }

    /// `Σ c_k · result(id_k)`, zero coefficients dropped.
    pub fn combine(&mut self, terms: &[(usize, Scalar)]) -> usize {
        let terms: Vec<&(usize, Scalar)> = terms.iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut result = Element::zero(&self.sig);
        for (id, c) in &terms {
            result.add_scaled(c, self.result(*id));
        }
        let inputs = terms.iter().map(|(i, _)| *i).collect();
        let coeffs = terms.iter().map(|(_, c)| c.clone()).collect();
        self.push(StepKind::Combine { inputs, coeffs }, result)
    }

    /// Replays one step against the recorded results of its inputs.
    pub fn replay_step(&self, id: usize, pool: &[ValidatedMap]) -> Result<(), String> {
        replay(&self.sig, &self.steps, id, pool, None)
    }
}

fn replay(
    sig: &Signature,
    steps: &[CertStep],
    id: usize,
    pool: &[ValidatedMap],
    seed: Option<&Element>,
) -> Result<(), String> {
    let step = &steps[id];
    if step.id != id {
        return Err(format!("step id {} recorded at position {id}", step.id));
    }
    if step.result.signature() != sig {
        return Err("result in the wrong signature".into());
    }
    let earlier = |i: usize| {
        if i < id {
            Ok(&steps[i].result)
        } else {
            Err(format!("input {i} does not precede step {id}"))
        }
    };
    let recomputed = match &step.kind {
        StepKind::Seed => match seed {
            Some(s) => s.clone(),
            None => step.result.clone(),
        },
        StepKind::Apply { map, input } => {
            let input = earlier(*input)?;
            let applied = match map {
                MapRef::Family(f) => builtin_family(sig, f).map_err(|e| format!("automorphism invalid: {e}"))?.apply(input),
                MapRef::Pool(k) => pool.get(*k).ok_or(format!("pool map {k} missing"))?.apply(input),
            };
            applied.map_err(|e| e.to_string())?
        }
        StepKind::Combine { inputs, coeffs } => {
            let elems = inputs.iter().map(|&i| earlier(i).cloned()).collect::<Result<Vec<_>, _>>()?;
            combine(sig, coeffs, &elems).map_err(|e| e.to_string())?
        }
    };
    if recomputed != step.result {
        return Err(format!("recorded {} but replay gives {}", step.result, recomputed));
    }
    Ok(())
}

/// Derivation from a seed plus a map from every monomial of total degree
/// `<= cap` to a step whose result is that monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub signature: Signature,
    pub seed: Element,
    pub cap: u32,
    pub steps: Vec<CertStep>,
    pub coverage: BTreeMap<Monomial, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    StepFailed { step: usize, reason: String },
    CoverageIncomplete { monomial: String },
    CoverageMismatch { monomial: String, step: usize },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Ok => write!(f, "ok"),
            Verdict::StepFailed { step, reason } => write!(f, "step {step} failed: {reason}"),
            Verdict::CoverageIncomplete { monomial } => write!(f, "coverage incomplete: {monomial} not covered"),
            Verdict::CoverageMismatch { monomial, step } => {
                write!(f, "coverage mismatch: step {step} does not equal {monomial}")
            }
        }
    }
}

/// Replays every step with exact arithmetic and re-checks coverage.
pub fn verify_certificate(cert: &ClosureCertificate, exec: Execution) -> Verdict {
    let sig = &cert.signature;
    if cert.steps.iter().any(|s| matches!(s.kind, StepKind::Apply { map: MapRef::Pool(_), .. })) {
        return Verdict::StepFailed {
            step: cert.steps.iter().position(|s| matches!(s.kind, StepKind::Apply { map: MapRef::Pool(_), .. })).unwrap(),
            reason: "pool references are not replayable from a certificate".into(),
        };
    }
    let ids: Vec<usize> = (0..cert.steps.len()).collect();
    let outcomes = par::map(exec, &ids, |&i| replay(sig, &cert.steps, i, &[], Some(&cert.seed)));
    if let Some((i, Err(reason))) = outcomes.into_iter().enumerate().find(|(_, r)| r.is_err()) {
        return Verdict::StepFailed { step: i, reason };
    }
    let basis = monomials_up_to(sig.generator_count(), cert.cap);
    for m in &basis {
        let Some(&step) = cert.coverage.get(m) else {
            return Verdict::CoverageIncomplete { monomial: format_monomial(sig, m) };
        };
        if step >= cert.steps.len() || cert.steps[step].result != Element::monomial(sig, m.clone()) {
            return Verdict::CoverageMismatch { monomial: format_monomial(sig, m), step };
        }
    }
    if let Some((m, &step)) = cert.coverage.iter().find(|(m, _)| basis.binary_search(m).is_err()) {
        return Verdict::CoverageMismatch { monomial: format_monomial(sig, m), step };
    }
    Verdict::Ok
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("invalid certificate: {0}")]
    Invalid(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct CertificateJson {
    schema_version: u32,
    signature: String,
    field: String,
    seed: String,
    cap: u32,
    steps: Vec<StepJson>,
    coverage: BTreeMap<String, usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepJson {
    id: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    map: Option<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    input: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    inputs: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    coeffs: Option<Vec<String>>,
    result: String,
}

impl ClosureCertificate {
    /// Canonical pretty-printed JSON; identical certificates give identical bytes.
    pub fn to_json(&self) -> String {
        let sig = &self.signature;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let mut j = StepJson {
                    id: s.id,
                    kind: String::new(),
                    map: None,
                    input: None,
                    inputs: None,
                    coeffs: None,
                    result: format_element(&s.result),
                };
                match &s.kind {
                    StepKind::Seed => j.kind = "seed".into(),
                    StepKind::Apply { map, input } => {
                        j.kind = "apply".into();
                        j.map = match map {
                            MapRef::Family(f) => Some(f.to_spec(sig)),
                            MapRef::Pool(_) => None,
                        };
                        j.input = Some(*input);
                    }
                    StepKind::Combine { inputs, coeffs } => {
                        j.kind = "combine".into();
                        j.inputs = Some(inputs.clone());
                        j.coeffs = Some(coeffs.iter().map(|c| c.to_string()).collect());
                    }
                }
                j
            })
            .collect();
        let doc = CertificateJson {
            schema_version: SCHEMA_VERSION,
            signature: sig.to_string(),
            field: sig.field().to_string(),
            seed: format_element(&self.seed),
            cap: self.cap,
            steps,
            coverage: self.coverage.iter().map(|(m, &id)| (format_monomial(sig, m), id)).collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let doc: CertificateJson = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CertificateError::SchemaVersion(doc.schema_version));
        }
        let invalid = |e: &dyn std::fmt::Display| CertificateError::Invalid(e.to_string());
        let field = Signature::parse_field(&doc.field).map_err(|e| invalid(&e))?;
        let sig = Signature::parse(&doc.signature, field).map_err(|e| invalid(&e))?;
        let elem = |t: &str| parse_element(t, &sig).map_err(|e| invalid(&format!("`{t}`: {e}")));
        let seed = elem(&doc.seed)?;
        let mut steps = Vec::with_capacity(doc.steps.len());
        for s in &doc.steps {
            let missing = |what: &str| CertificateError::Invalid(format!("step {}: missing {what}", s.id));
            let kind = match s.kind.as_str() {
                "seed" => StepKind::Seed,
                "apply" => {
                    let spec = s.map.as_ref().ok_or_else(|| missing("map"))?;
                    let family = spec.to_family(&sig).map_err(|e| invalid(&format!("step {}: {e}", s.id)))?;
                    StepKind::Apply { map: MapRef::Family(family), input: s.input.ok_or_else(|| missing("input"))? }
                }
                "combine" => {
                    let inputs = s.inputs.clone().ok_or_else(|| missing("inputs"))?;
                    let coeffs = s
                        .coeffs
                        .as_ref()
                        .ok_or_else(|| missing("coeffs"))?
                        .iter()
                        .map(|c| field.parse_scalar(c).map_err(|e| invalid(&format!("step {}: {e}", s.id))))
                        .collect::<Result<Vec<_>, _>>()?;
                    StepKind::Combine { inputs, coeffs }
                }
                other => return Err(invalid(&format!("step {}: unknown kind `{other}`", s.id))),
            };
            steps.push(CertStep { id: s.id, kind, result: elem(&s.result)? });
        }
        let mut coverage = BTreeMap::new();
        for (text, &id) in &doc.coverage {
            let e = elem(text)?;
            let m = match e.terms().next() {
                Some((m, c)) if e.len() == 1 && c.is_one() => m.clone(),
                _ => return Err(invalid(&format!("coverage key `{text}` is not a monomial"))),
            };
            coverage.insert(m, id);
        }
        Ok(ClosureCertificate { signature: sig, seed, cap: doc.cap, steps, coverage })
    }

    /// Distinct automorphism families used by the certificate, in first-use order.
    pub fn families(&self) -> Vec<AutFamily> {
        let mut out: Vec<AutFamily> = Vec::new();
        for s in &self.steps {
            if let StepKind::Apply { map: MapRef::Family(f), .. } = &s.kind {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        }
        out
    }
}
