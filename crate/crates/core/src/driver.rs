//! The decision driver: forward search for witnesses interleaved with the
//! search for separating certificates on the reduced system.

use crate::certify::{audit_certificate, enumerate_algebraic_vectors, extremal_candidates, verify_separator};
use crate::certify::SeparatorCertificate;
use crate::forward::{reach_exactly, verify_witness, ReachWitness};
use crate::geometry::GenPolyhedron;
use crate::linalg::{spectral_decompose, AlgVector, SpectralData};
use crate::preprocess::{check_simple, to_simple_form, LtiSystem, SimpleForm};
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

/// Candidates verified per round in single-worker mode.
pub const BATCH: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub max_steps: usize,
    pub max_candidates: usize,
    pub max_degree: usize,
    pub max_height: usize,
    /// Partial-sum depth and pattern cap for the geometric candidates.
    pub pattern_budget: usize,
    /// 1 runs the deterministic round-robin; more runs forward search and
    /// `workers − 1` certificate workers concurrently.
    pub workers: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { max_steps: 32, max_candidates: 4096, max_degree: 4, max_height: 8, pattern_budget: 8, workers: 2 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "evidence", rename_all = "snake_case")]
pub enum UnreachableEvidence {
    Separator { certificate: SeparatorCertificate, form: SimpleForm },
    /// The reduced target is empty: nothing in the target is reachable.
    EmptyReducedTarget { form: SimpleForm },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Reachable { witness: ReachWitness },
    Unreachable(UnreachableEvidence),
    Unknown { forward_horizon: usize, candidates_tried: usize, max_degree: usize, max_height: usize },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Reachable { .. } => 0,
            Verdict::Unreachable(_) => 1,
            Verdict::Unknown { .. } => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Reachable { .. } => "reachable",
            Verdict::Unreachable(_) => "unreachable",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

/// Everything the certificate search needs, built once per instance.
pub struct CertSearch {
    pub form: SimpleForm,
    pub spectral: SpectralData,
    pub u: GenPolyhedron,
    pub q: GenPolyhedron,
    candidates: Box<dyn Iterator<Item = AlgVector> + Send>,
    pub tried: usize,
    limit: usize,
}

pub enum Setup {
    Search(Box<CertSearch>),
    Empty(SimpleForm),
    /// Forward search only, with the reason.
    ForwardOnly(String),
}

/// Preprocesses for certificate search, or explains why only forward
/// search applies.
pub fn prepare(sys: &LtiSystem, budgets: &Budgets) -> Setup {
    let report = check_simple(sys);
    if let Some(why) = report.failure() {
        return Setup::ForwardOnly(format!("system is not simple ({why}); running forward search only"));
    }
    if !report.source_zero {
        return Setup::ForwardOnly("source is not 0; running forward search only".into());
    }
    let form = match to_simple_form(sys) {
        Ok(f) => f,
        Err(e) => return Setup::ForwardOnly(format!("preprocessing failed ({e}); running forward search only")),
    };
    let Some(q) = form.q_reduced.clone() else { return Setup::Empty(form) };
    if form.a_reduced.rows() == 0 {
        return Setup::ForwardOnly("reachable set is {0}; forward search decides".into());
    }
    let spectral = match spectral_decompose(&form.a_reduced) {
        Ok(s) => s,
        Err(e) => return Setup::ForwardOnly(format!("spectral decomposition failed ({e}); running forward search only")),
    };
    let u = form.u_reduced.clone();
    let dim = spectral.dim;
    let candidates = extremal_candidates(&spectral, &u, &q, budgets.pattern_budget)
        .chain(enumerate_algebraic_vectors(dim, budgets.max_degree, budgets.max_height));
    Setup::Search(Box::new(CertSearch {
        form,
        spectral,
        u,
        q,
        candidates: Box::new(candidates),
        tried: 0,
        limit: budgets.max_candidates,
    }))
}

impl CertSearch {
    pub fn next_candidate(&mut self) -> Option<AlgVector> {
        if self.tried >= self.limit {
            return None;
        }
        let c = self.candidates.next()?;
        self.tried += 1;
        Some(c)
    }

    /// A certificate for `tau` that also passes the independent audit.
    pub fn check(&self, tau: &AlgVector) -> Option<SeparatorCertificate> {
        check_candidate(&self.spectral, &self.u, &self.q, tau)
    }

    fn evidence(&self, certificate: SeparatorCertificate) -> Verdict {
        Verdict::Unreachable(UnreachableEvidence::Separator { certificate, form: self.form.clone() })
    }
}

fn check_candidate(s: &SpectralData, u: &GenPolyhedron, q: &GenPolyhedron, tau: &AlgVector) -> Option<SeparatorCertificate> {
    match verify_separator(s, u, q, tau) {
        Ok(Some(c)) => match audit_certificate(s, u, q, &c) {
            Ok(()) => Some(c),
            Err(e) => {
                log::error!("self-audit rejected a certificate: {e}");
                None
            }
        },
        Ok(None) => None,
        Err(e) => {
            log::debug!("candidate skipped: {e}");
            None
        }
    }
}

fn forward_step(sys: &LtiSystem, n: usize) -> Option<ReachWitness> {
    let w = reach_exactly(sys, n)?;
    match verify_witness(sys, &w) {
        Ok(true) => Some(w),
        other => {
            log::error!("forward witness at horizon {n} failed replay: {other:?}");
            None
        }
    }
}

pub fn decide(sys: &LtiSystem, budgets: &Budgets) -> Decision {
    let mut warnings = Vec::new();
    let search = match prepare(sys, budgets) {
        Setup::Empty(form) => {
            return Decision { verdict: Verdict::Unreachable(UnreachableEvidence::EmptyReducedTarget { form }), warnings };
        }
        Setup::ForwardOnly(why) => {
            log::info!("{why}");
            warnings.push(why);
            None
        }
        Setup::Search(s) => Some(s),
    };
    let verdict = if budgets.workers <= 1 || search.is_none() {
        round_robin(sys, budgets, search)
    } else {
        concurrent(sys, budgets, *search.expect("checked"))
    };
    Decision { verdict, warnings }
}

fn unknown(budgets: &Budgets, horizon: usize, tried: usize) -> Verdict {
    Verdict::Unknown {
        forward_horizon: horizon,
        candidates_tried: tried,
        max_degree: budgets.max_degree,
        max_height: budgets.max_height,
    }
}

/// One forward horizon, then a batch of candidates, until something is
/// verified or both searches are exhausted.
fn round_robin(sys: &LtiSystem, budgets: &Budgets, mut search: Option<Box<CertSearch>>) -> Verdict {
    let mut n = 0;
    let mut certs_done = search.is_none();
    loop {
        if n <= budgets.max_steps {
            if let Some(witness) = forward_step(sys, n) {
                return Verdict::Reachable { witness };
            }
            n += 1;
        }
        if let Some(s) = search.as_mut().filter(|_| !certs_done) {
            for _ in 0..BATCH {
                let Some(tau) = s.next_candidate() else {
                    certs_done = true;
                    break;
                };
                if let Some(c) = s.check(&tau) {
                    return s.evidence(c);
                }
            }
        }
        if n > budgets.max_steps && certs_done {
            let tried = search.as_ref().map_or(0, |s| s.tried);
            return unknown(budgets, budgets.max_steps, tried);
        }
    }
}

fn concurrent(sys: &LtiSystem, budgets: &Budgets, search: CertSearch) -> Verdict {
    let stop = AtomicBool::new(false);
    let result: Mutex<Option<Verdict>> = Mutex::new(None);
    let publish = |v: Verdict| {
        let mut slot = result.lock().expect("result lock");
        if let Some(prev) = slot.as_ref() {
            if prev.label() != v.label() {
                log::error!("conflicting verdicts {} and {}", prev.label(), v.label());
            }
        } else {
            *slot = Some(v);
        }
        stop.store(true, Ordering::SeqCst);
    };
    let tried = AtomicUsize::new(0);
    let CertSearch { form, spectral, u, q, candidates, limit, .. } = search;
    let stream = Mutex::new(candidates);
    std::thread::scope(|scope| {
        scope.spawn(|| {
            for n in 0..=budgets.max_steps {
                if stop.load(Ordering::SeqCst) {
                    return;
                }
                if let Some(witness) = forward_step(sys, n) {
                    publish(Verdict::Reachable { witness });
                    return;
                }
            }
        });
        for _ in 1..budgets.workers {
            scope.spawn(|| loop {
                if stop.load(Ordering::SeqCst) {
                    return;
                }
                let tau = {
                    let mut it = stream.lock().expect("candidate lock");
                    if tried.load(Ordering::SeqCst) >= limit {
                        return;
                    }
                    match it.next() {
                        Some(t) => {
                            tried.fetch_add(1, Ordering::SeqCst);
                            t
                        }
                        None => return,
                    }
                };
                if let Some(certificate) = check_candidate(&spectral, &u, &q, &tau) {
                    publish(Verdict::Unreachable(UnreachableEvidence::Separator { certificate, form: form.clone() }));
                    return;
                }
            });
        }
    });
    let out = result.into_inner().expect("result lock");
    out.unwrap_or_else(|| unknown(budgets, budgets.max_steps, tried.load(Ordering::SeqCst)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, Rat};
    use crate::geometry::ControlSet;
    use crate::linalg::RatMatrix;

    fn fig(target: GenPolyhedron) -> LtiSystem {
        let u = GenPolyhedron::polytope(
            [[-2, -1], [0, -1], [0, 1], [2, 1]].iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect(),
        );
        LtiSystem::new(RatMatrix::diag(&[rat(1, 3), rat(2, 3)]), ControlSet::single(u), vec![int(0), int(0)], target)
            .unwrap()
    }

    fn single() -> Budgets {
        Budgets { workers: 1, ..Budgets::default() }
    }

    #[test]
    fn separated_square() {
        let sq = GenPolyhedron::cube(2, &int(1)).translate(&[int(4), int(0)]);
        for b in [single(), Budgets::default()] {
            let d = decide(&fig(sq.clone()), &b);
            let Verdict::Unreachable(UnreachableEvidence::Separator { certificate, .. }) = d.verdict else {
                panic!("{:?}", d.verdict)
            };
            assert_eq!(certificate.sup_value.as_rat(), certificate.bound.as_rat());
        }
        let d = decide(&fig(sq), &single());
        let Verdict::Unreachable(UnreachableEvidence::Separator { certificate, .. }) = d.verdict else { panic!() };
        assert_eq!(certificate.tau.as_rational(), Some(&[int(1), int(0)][..]));
        assert_eq!(certificate.sup_value.as_rat(), Some(&int(3)));
    }

    #[test]
    fn boundary_and_reachable_points() {
        let d = decide(&fig(GenPolyhedron::point(vec![int(0), int(3)])), &single());
        let Verdict::Unreachable(UnreachableEvidence::Separator { certificate, .. }) = d.verdict else { panic!() };
        assert_eq!(certificate.sup_value.as_rat(), Some(&int(3)));
        assert_eq!(certificate.min_over_q.as_rat(), Some(&int(3)));
        let sys = fig(GenPolyhedron::point(vec![int(1), int(1)]));
        let d = decide(&sys, &single());
        let Verdict::Reachable { witness } = d.verdict else { panic!() };
        assert_eq!(verify_witness(&sys, &witness), Ok(true));
    }

    #[test]
    fn non_simple_degrades() {
        let c = rat(3, 10);
        let s = rat(4, 10);
        let a = RatMatrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]);
        let u = GenPolyhedron::cube(2, &int(1));
        let sys = LtiSystem::new(a, ControlSet::single(u), vec![Rat::from_integer(0.into()); 2], GenPolyhedron::point(vec![int(9), int(9)]))
            .unwrap();
        let d = decide(&sys, &Budgets { max_steps: 3, ..single() });
        assert!(matches!(d.verdict, Verdict::Unknown { forward_horizon: 3, .. }));
        assert_eq!(d.warnings.len(), 1);
        assert!(d.warnings[0].contains("no positive power of A has an exclusively real spectrum"));
    }
}
