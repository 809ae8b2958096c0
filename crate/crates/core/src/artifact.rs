//! Verdict files and their independent re-verification.

use crate::certify::{audit_certificate, AuditError};
use crate::driver::{UnreachableEvidence, Verdict};
use crate::format::emit_instance;
use crate::forward::verify_witness;
use crate::linalg::spectral_decompose;
use crate::preprocess::{check_simple, to_simple_form, LtiSystem};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// SHA-256 of the canonical instance text.
pub fn instance_hash(sys: &LtiSystem) -> String {
    hex::encode(Sha256::digest(emit_instance(sys).as_bytes()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Artifact {
    pub instance_sha256: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum AuditFailure {
    #[error("instance hash mismatch: artifact has {stated}, instance is {actual}")]
    HashMismatch { stated: String, actual: String },
    #[error("witness does not replay into the target")]
    WitnessRejected,
    #[error("witness is malformed: {0}")]
    WitnessMalformed(String),
    #[error("instance is not eligible for certificates: {0}")]
    NotEligible(String),
    #[error("stored reduction differs from the recomputed one")]
    FormMismatch,
    #[error("reduced target is not empty")]
    TargetNotEmpty,
    #[error("certificate rejected: {0}")]
    Certificate(#[from] AuditError),
    #[error("spectral decomposition failed: {0}")]
    Spectral(String),
}

impl Artifact {
    pub fn new(sys: &LtiSystem, verdict: Verdict, warnings: Vec<String>) -> Self {
        Self { instance_sha256: instance_hash(sys), verdict, warnings }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Recomputes everything the verdict rests on from the instance alone.
/// `Unknown` verdicts make no claim and always pass.
pub fn audit_artifact(sys: &LtiSystem, art: &Artifact) -> Result<(), AuditFailure> {
    let actual = instance_hash(sys);
    if actual != art.instance_sha256 {
        return Err(AuditFailure::HashMismatch { stated: art.instance_sha256.clone(), actual });
    }
    match &art.verdict {
        Verdict::Reachable { witness } => match verify_witness(sys, witness) {
            Ok(true) => Ok(()),
            Ok(false) => Err(AuditFailure::WitnessRejected),
            Err(e) => Err(AuditFailure::WitnessMalformed(e.to_string())),
        },
        Verdict::Unreachable(ev) => {
            let report = check_simple(sys);
            if let Some(why) = report.failure() {
                return Err(AuditFailure::NotEligible(why.into()));
            }
            if !report.source_zero {
                return Err(AuditFailure::NotEligible("source is not 0".into()));
            }
            let form = to_simple_form(sys).map_err(|e| AuditFailure::NotEligible(e.to_string()))?;
            match ev {
                UnreachableEvidence::EmptyReducedTarget { form: stated } => {
                    if *stated != form {
                        return Err(AuditFailure::FormMismatch);
                    }
                    if form.q_reduced.is_some() {
                        return Err(AuditFailure::TargetNotEmpty);
                    }
                    Ok(())
                }
                UnreachableEvidence::Separator { certificate, form: stated } => {
                    if *stated != form {
                        return Err(AuditFailure::FormMismatch);
                    }
                    let q = form.q_reduced.as_ref().ok_or(AuditFailure::FormMismatch)?;
                    let s = spectral_decompose(&form.a_reduced).map_err(|e| AuditFailure::Spectral(e.to_string()))?;
                    audit_certificate(&s, &form.u_reduced, q, certificate)?;
                    Ok(())
                }
            }
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::{decide, Budgets};
    use crate::exactnum::{rat, RealAlg};
    use crate::format::parse_instance;

    const FIG: &str = "dim 2\nmatrix\n1/3 0\n0 2/3\ncontrol\nvertices\n-2 -1\n0 -1\n0 1\n2 1\nsource 0 0\n";

    fn sys(target: &str) -> LtiSystem {
        parse_instance(&format!("{FIG}target vertices\n{target}\n")).unwrap()
    }

    fn decided(s: &LtiSystem) -> Artifact {
        let d = decide(s, &Budgets { workers: 1, ..Budgets::default() });
        Artifact::new(s, d.verdict, d.warnings)
    }

    #[test]
    fn certificate_round_trip_and_tamper() {
        let s = sys("0 3");
        let art = Artifact::from_json(&decided(&s).to_json()).unwrap();
        audit_artifact(&s, &art).unwrap();
        let mut bad = art.clone();
        if let Verdict::Unreachable(UnreachableEvidence::Separator { certificate, .. }) = &mut bad.verdict {
            certificate.sup_value = RealAlg::from_rat(rat(5, 2));
        } else {
            panic!("expected a separator");
        }
        assert!(matches!(audit_artifact(&s, &bad), Err(AuditFailure::Certificate(_))));
    }

    #[test]
    fn witness_against_wrong_instance() {
        let s = sys("1 1");
        let art = decided(&s);
        assert!(matches!(art.verdict, Verdict::Reachable { .. }));
        audit_artifact(&s, &art).unwrap();
        let other = sys("1 2");
        assert!(matches!(audit_artifact(&other, &art), Err(AuditFailure::HashMismatch { .. })));
        let mut forged = art.clone();
        forged.instance_sha256 = instance_hash(&other);
        assert!(matches!(audit_artifact(&other, &forged), Err(AuditFailure::WitnessRejected)));
    }

    #[test]
    fn hash_is_of_canonical_text() {
        let s = sys("0 3");
        let reparsed = parse_instance(&emit_instance(&s)).unwrap();
        assert_eq!(instance_hash(&s), instance_hash(&reparsed));
        assert_eq!(instance_hash(&s).len(), 64);
    }
}
