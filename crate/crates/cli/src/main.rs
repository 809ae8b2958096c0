use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ltireach::artifact::{audit_artifact, Artifact};
use ltireach::driver::{decide, prepare, Budgets, Setup, UnreachableEvidence, Verdict};
use ltireach::exactnum::{parse_rat, Rat};
use ltireach::format::{emit_instance, parse_instance};
use ltireach::forward::reach_within;
use ltireach::gadgets::{
    markov_to_lti, powering_to_vector_reach, skolem_to_lti, vector_reach_to_lti, PoweringInstance, VectorReachInstance,
};
use ltireach::linalg::RatMatrix;
use ltireach::preprocess::{to_simple_form, LtiSystem};
use ltireach::render::{render_partial_reach, Line};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ltireach", version, about = "Exact reachability for discrete-time LTI systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    #[arg(long, default_value_t = 32)]
    max_steps: usize,
    #[arg(long, default_value_t = 4096)]
    max_candidates: usize,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
    #[arg(long, default_value_t = 8)]
    max_height: usize,
    /// Depth of the geometric candidate generators.
    #[arg(long, default_value_t = 8)]
    pattern_budget: usize,
    /// Deterministic round-robin in one thread.
    #[arg(long)]
    single_worker: bool,
    /// Worker threads when not in single-worker mode.
    #[arg(long, default_value_t = 2)]
    workers: usize,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        Budgets {
            max_steps: self.max_steps,
            max_candidates: self.max_candidates,
            max_degree: self.max_degree,
            max_height: self.max_height,
            pattern_budget: self.pattern_budget,
            workers: if self.single_worker { 1 } else { self.workers.max(2) },
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Interleaved forward and certificate search.
    Decide {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward search only.
    Forward {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 32)]
        max_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate search only.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a verdict file against an instance.
    Audit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        artifact: PathBuf,
    },
    /// Emit instances from the hardness reductions.
    Gadget {
        #[command(subcommand)]
        kind: GadgetCmd,
    },
    /// Draw the partial reachable set of a planar instance.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 12)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Verdict file whose separating line should be drawn.
        #[arg(long)]
        artifact: Option<PathBuf>,
    },
}

/// Matrices are written row by row, rows separated by `;`, e.g. "0 1; -1 0".
#[derive(Subcommand)]
enum GadgetCmd {
    Skolem {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Markov {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Vecreach {
        /// One per factor, applied first to last.
        #[arg(long = "matrix", required = true, allow_hyphen_values = true)]
        matrices: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Exponents to turn into a witness for the generated instance.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        exponents: Option<Vec<i64>>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Powering {
        #[arg(long = "matrix", required = true, allow_hyphen_values = true)]
        matrices: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_instance(path: &Path) -> Result<LtiSystem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_vector(s: &str) -> Result<Vec<Rat>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_rat(t).map_err(Into::into))
        .collect()
}

fn parse_matrix(s: &str) -> Result<RatMatrix> {
    let rows: Vec<Vec<Rat>> = s.split(';').map(parse_vector).collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("matrix `{s}` is not square");
    }
    Ok(RatMatrix::from_rows(rows))
}

fn summarize(v: &Verdict) {
    match v {
        Verdict::Reachable { witness } => println!("reachable (horizon {})", witness.horizon),
        Verdict::Unreachable(UnreachableEvidence::Separator { certificate, .. }) => println!(
            "unreachable (separator {:?}, sup {} ≤ {})",
            certificate.tau.to_f64(),
            certificate.sup_value.to_f64(),
            certificate.min_over_q.to_f64()
        ),
        Verdict::Unreachable(UnreachableEvidence::EmptyReducedTarget { .. }) => {
            println!("unreachable (target misses the reachable subspace)")
        }
        Verdict::Unknown { forward_horizon, candidates_tried, max_degree, max_height } => println!(
            "unknown (forward horizon {forward_horizon}, {candidates_tried} candidates, degree ≤ {max_degree}, height ≤ {max_height})"
        ),
    }
}

fn finish(sys: &LtiSystem, verdict: Verdict, warnings: Vec<String>, out: Option<&Path>) -> Result<i32> {
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    summarize(&verdict);
    let code = verdict.exit_code();
    if let Some(p) = out {
        let art = Artifact::new(sys, verdict, warnings);
        std::fs::write(p, art.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(code)
}

fn certify_only(sys: &LtiSystem, budgets: &Budgets) -> Result<Verdict> {
    match prepare(sys, budgets) {
        Setup::Empty(form) => Ok(Verdict::Unreachable(UnreachableEvidence::EmptyReducedTarget { form })),
        Setup::ForwardOnly(why) => bail!("certificate search does not apply: {why}"),
        Setup::Search(mut s) => {
            while let Some(tau) = s.next_candidate() {
                if let Some(certificate) = s.check(&tau) {
                    return Ok(Verdict::Unreachable(UnreachableEvidence::Separator { certificate, form: s.form.clone() }));
                }
            }
            Ok(Verdict::Unknown {
                forward_horizon: 0,
                candidates_tried: s.tried,
                max_degree: budgets.max_degree,
                max_height: budgets.max_height,
            })
        }
    }
}

fn gadget(kind: GadgetCmd) -> Result<i32> {
    let (sys, out) = match kind {
        GadgetCmd::Skolem { matrix, out } => (skolem_to_lti(&parse_matrix(&matrix)?)?, out),
        GadgetCmd::Markov { matrix, out } => (markov_to_lti(&parse_matrix(&matrix)?)?, out),
        GadgetCmd::Powering { matrices, target, out } => {
            let ms = matrices.iter().map(|m| parse_matrix(m)).collect::<Result<Vec<_>>>()?;
            let p = PoweringInstance::new(ms, parse_matrix(&target)?)?;
            (vector_reach_to_lti(&powering_to_vector_reach(&p)).system, out)
        }
        GadgetCmd::Vecreach { matrices, x, y, exponents, witness_out, out } => {
            let ms = matrices.iter().map(|m| parse_matrix(m)).collect::<Result<Vec<_>>>()?;
            let v = VectorReachInstance::new(ms, parse_vector(&x)?, parse_vector(&y)?)?;
            let lti = vector_reach_to_lti(&v);
            if let Some(exps) = exponents {
                let sched = lti.schedule(&exps)?;
                eprintln!("times {:?}, horizon {}", sched.times, sched.horizon);
                let art = Artifact::new(&lti.system, Verdict::Reachable { witness: sched.witness }, vec![]);
                write_or_print(witness_out.as_deref(), &art.to_json())?;
            }
            (lti.system, out)
        }
    };
    write_or_print(out.as_deref(), &emit_instance(&sys))?;
    Ok(0)
}

fn render(input: &Path, steps: usize, out: &Path, artifact: Option<&Path>) -> Result<i32> {
    let sys = read_instance(input)?;
    let art = match artifact {
        Some(p) => Some(Artifact::from_json(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let cert = match art.as_ref().map(|a| &a.verdict) {
        Some(Verdict::Unreachable(UnreachableEvidence::Separator { certificate, form })) => {
            // the line lives in reduced coordinates; draw it only when those are the originals
            let fresh = to_simple_form(&sys)?;
            let same = fresh == *form
                && form.a_reduced == sys.a
                && Some(&sys.target) == form.q_reduced.as_ref()
                && sys.controls.as_polytope() == Some(&form.u_reduced);
            if same {
                Some(certificate)
            } else {
                log::warn!("certificate is for a reduced system; not drawing it");
                None
            }
        }
        _ => None,
    };
    let line = cert.map(|c| Line { tau: &c.tau, level: &c.bound });
    let svg = render_partial_reach(&sys, steps, line)?;
    std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Decide { input, budgets, out } => {
            let sys = read_instance(&input)?;
            let d = decide(&sys, &budgets.budgets());
            finish(&sys, d.verdict, d.warnings, out.as_deref())
        }
        Cmd::Forward { input, max_steps, out } => {
            let sys = read_instance(&input)?;
            let verdict = match reach_within(&sys, max_steps) {
                Some(witness) => Verdict::Reachable { witness },
                None => Verdict::Unknown { forward_horizon: max_steps, candidates_tried: 0, max_degree: 0, max_height: 0 },
            };
            finish(&sys, verdict, vec![], out.as_deref())
        }
        Cmd::Certify { input, budgets, out } => {
            let sys = read_instance(&input)?;
            let verdict = certify_only(&sys, &budgets.budgets())?;
            finish(&sys, verdict, vec![], out.as_deref())
        }
        Cmd::Audit { input, artifact } => {
            let sys = read_instance(&input)?;
            let text = std::fs::read_to_string(&artifact).with_context(|| format!("reading {}", artifact.display()))?;
            let art = Artifact::from_json(&text).with_context(|| format!("parsing {}", artifact.display()))?;
            match audit_artifact(&sys, &art) {
                Ok(()) => {
                    println!("ok: {} verdict stands", art.verdict.label());
                    Ok(0)
                }
                Err(e) => {
                    println!("rejected: {e}");
                    Ok(1)
                }
            }
        }
        Cmd::Gadget { kind } => gadget(kind),
        Cmd::Render { input, steps, out, artifact } => render(&input, steps, &out, artifact.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
