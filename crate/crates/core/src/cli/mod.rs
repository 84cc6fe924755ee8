//! Command-line front end: argument model, command runners, report text.
//!
//! Every runner returns the full stdout text so that output is a pure
//! function of inputs and flags. Exit codes: 0 ok, 1 I/O, 2 validation,
//! 3 incoherent target, 4 precondition.

pub mod format;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::catalysis::{catalyst_report, search_catalyst_with, AlphaGrid, CatalysisCheck, EnhancementCheck};
use crate::distill::{full_plan_with, pmax_mixed_with, DistillationPlan};
use crate::measures::{majorizes, min_cl_ratio, shannon_entropy};
use crate::oracles::{simulate, verify_branch_outputs, BranchVerdict};
use crate::registry::{finders, objectives, SubspaceFinder, DEFAULT_FINDER};
use crate::states::{DensityMatrix, PureStateVector};
use crate::subspaces::{a_matrix, PureSubspace};
use crate::Error;
use format::{amplitudes_json, parse_protocol, parse_state, ProtocolFile, StateFile};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "COHDIST_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    IncoherentTarget(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::IncoherentTarget(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::IncoherentTarget => CliError::IncoherentTarget(e.to_string()),
            Error::Precondition(_) => CliError::Precondition(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cohdist", version, about = "Coherence distillation under strictly incoherent operations")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximal pure subspace finder (`clique` or `exhaustive`).
    #[arg(long, global = true, default_value = DEFAULT_FINDER)]
    pub finder: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a state file parses and satisfies its invariants.
    Validate { file: PathBuf },
    /// Coherence support graph and maximal pure subspaces.
    Subspaces { state: PathBuf },
    /// Maximal distillation probability toward a pure target.
    Pmax {
        state: PathBuf,
        target: PathBuf,
        /// Also synthesize the protocol and write it here.
        #[arg(long)]
        protocol: Option<PathBuf>,
    },
    /// Synthesize an optimal protocol (JSON on stdout unless --out is given).
    Protocol {
        state: PathBuf,
        target: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo run of a protocol file on a state.
    Simulate {
        protocol: PathBuf,
        state: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that every branch of a protocol file outputs the target.
    Verify { protocol: PathBuf, state: PathBuf, target: PathBuf },
    /// Catalytic enhancement gates and catalyst search.
    Catalyst {
        #[command(subcommand)]
        action: CatalystCommand,
    },
    /// Majorization relation between two distributions (or pure profiles).
    Majorize { p: PathBuf, q: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CatalystCommand {
    /// Both enhancement gates with their margins.
    Gate {
        state: PathBuf,
        target: PathBuf,
        /// Number of sampled α values per side of 1 (plus 0 and ±∞).
        #[arg(long, default_value_t = 60)]
        alpha_points: usize,
    },
    /// Grid search over catalyst profiles.
    Search {
        state: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// `probabilistic` (maximize) or `deterministic` (reach 1).
        #[arg(long, default_value = "probabilistic")]
        mode: String,
    },
}

/// Sizes the global rayon pool from [`WORKERS_ENV`], if set.
pub fn configure_workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{WORKERS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Precondition(format!("cannot size worker pool: {e}")))
}

/// Formats a value with 12 significant digits, trailing zeros trimmed.
pub fn fmt_prob(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(1) as usize;
    let s = format!("{x:.decimals$}");
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_prob(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_prob(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt_prob(z.re), fmt_prob(z.im.abs()))
    }
}

fn fmt_list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    format!("[{}]", items.iter().map(f).collect::<Vec<_>>().join(", "))
}

fn fmt_indices(ix: &[usize]) -> String {
    fmt_list(ix, usize::to_string)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn load_state(path: &Path) -> Result<StateFile, CliError> {
    parse_state(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_density(path: &Path) -> Result<DensityMatrix, CliError> {
    Ok(load_state(path)?.into_density())
}

fn load_target(path: &Path) -> Result<PureStateVector, CliError> {
    match load_state(path)? {
        StateFile::Pure(p) => Ok(p),
        other => Err(CliError::Validation(format!(
            "{}: target must be a pure state (`amplitudes`), found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn load_protocol(path: &Path) -> Result<crate::distill::Protocol, CliError> {
    parse_protocol(&read(path)?).map_err(|e| with_path(path, e))
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Runs one parsed command and returns its stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let json = cli.json;
    let registry = finders();
    let finder = |name: &str| registry.get(name);
    match &cli.command {
        Command::Validate { file } => cmd_validate(file, json),
        Command::Subspaces { state } => cmd_subspaces(finder(&cli.finder)?, state, json),
        Command::Pmax { state, target, protocol } => {
            cmd_pmax(finder(&cli.finder)?, state, target, protocol.as_deref(), json)
        }
        Command::Protocol { state, target, out } => cmd_protocol(finder(&cli.finder)?, state, target, out.as_deref(), json),
        Command::Simulate { protocol, state, shots, seed } => cmd_simulate(protocol, state, *shots, *seed, json),
        Command::Verify { protocol, state, target } => cmd_verify(protocol, state, target, json),
        Command::Catalyst { action: CatalystCommand::Gate { state, target, alpha_points } } => {
            cmd_catalyst_gate(finder(&cli.finder)?, state, target, *alpha_points, json)
        }
        Command::Catalyst { action: CatalystCommand::Search { state, target, max_dim, step, mode } } => {
            cmd_catalyst_search(finder(&cli.finder)?, state, target, *max_dim, *step, mode, json)
        }
        Command::Majorize { p, q } => cmd_majorize(p, q, json),
    }
}

fn cmd_validate(path: &Path, json: bool) -> Result<String, CliError> {
    let state = load_state(path)?;
    let mut fields = serde_json::Map::new();
    fields.insert("valid".into(), json!(true));
    fields.insert("kind".into(), json!(state.kind()));
    fields.insert("dim".into(), json!(state.dim()));
    match &state {
        StateFile::Density(rho) => {
            fields.insert("incoherent".into(), json!(rho.is_incoherent()));
        }
        StateFile::Pure(psi) => {
            fields.insert("coherence_rank".into(), json!(crate::measures::coherence_rank(psi)));
        }
        StateFile::Distribution(p) => {
            fields.insert("entropy".into(), json!(shannon_entropy(p.as_slice())));
        }
    }
    if json {
        return Ok(to_json(&Value::Object(fields)));
    }
    let mut out = String::new();
    writeln!(out, "valid: true").unwrap();
    writeln!(out, "kind: {}", state.kind()).unwrap();
    writeln!(out, "dim: {}", state.dim()).unwrap();
    match &state {
        StateFile::Density(rho) => writeln!(out, "incoherent: {}", rho.is_incoherent()).unwrap(),
        StateFile::Pure(psi) => writeln!(out, "coherence_rank: {}", crate::measures::coherence_rank(psi)).unwrap(),
        StateFile::Distribution(p) => writeln!(out, "entropy: {}", fmt_prob(shannon_entropy(p.as_slice()))).unwrap(),
    }
    Ok(out)
}

fn subspace_json(s: &PureSubspace) -> Value {
    json!({
        "indices": s.indices(),
        "weight": s.weight(),
        "coherence_rank": s.coherence_rank(),
        "amplitudes": amplitudes_json(s.state()),
    })
}

fn cmd_subspaces(finder: &dyn SubspaceFinder, path: &Path, json: bool) -> Result<String, CliError> {
    let rho = load_density(path)?;
    let a = a_matrix(&rho);
    let subspaces = finder.find(&rho)?;
    let distillable = subspaces.iter().any(|s| s.coherence_rank() >= 2);
    if json {
        let rows: Vec<Vec<f64>> = (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
        return Ok(to_json(&json!({
            "dim": rho.dim(),
            "finder": finder.name(),
            "a_matrix": rows,
            "subspaces": subspaces.iter().map(subspace_json).collect::<Vec<_>>(),
            "distillable": distillable,
        })));
    }
    let mut out = String::new();
    writeln!(out, "a_matrix:").unwrap();
    for i in 0..a.nrows() {
        let row: Vec<String> = a.row(i).iter().map(|v| format!("{v:.6}")).collect();
        writeln!(out, "  {}", row.join(" ")).unwrap();
    }
    writeln!(out, "subspaces ({}):", subspaces.len()).unwrap();
    for s in &subspaces {
        writeln!(
            out,
            "  {}  weight {}  rank {}  state {}",
            fmt_indices(s.indices()),
            fmt_prob(s.weight()),
            s.coherence_rank(),
            fmt_list(s.state().amplitudes().as_slice(), |z| fmt_complex(*z)),
        )
        .unwrap();
    }
    writeln!(out, "distillable: {distillable}").unwrap();
    Ok(out)
}

fn plan_json(plan: &DistillationPlan) -> Value {
    json!({
        "p_max": plan.p_max,
        "family": plan.family.index_sets(),
        "subspaces": plan.subspaces.iter().map(|s| s.indices().to_vec()).collect::<Vec<_>>(),
        "branches": plan.per_branch.iter().map(|b| json!({
            "indices": b.indices,
            "weight": b.weight,
            "min_ratio": b.min_ratio,
            "minimizing_l": b.minimizing_l,
            "achieved": b.achieved,
        })).collect::<Vec<_>>(),
        "overlap_flagged": plan.overlap_flagged(),
    })
}

fn plan_text(plan: &DistillationPlan) -> String {
    let mut out = String::new();
    writeln!(out, "p_max: {}", fmt_prob(plan.p_max)).unwrap();
    writeln!(out, "family: {}", fmt_list(&plan.family.index_sets(), |s| fmt_indices(s))).unwrap();
    writeln!(out, "branches:").unwrap();
    for b in &plan.per_branch {
        writeln!(
            out,
            "  subspace {}  weight {}  min_ratio {}  l {}  contribution {}",
            fmt_indices(&b.indices),
            fmt_prob(b.weight),
            fmt_prob(b.min_ratio),
            b.minimizing_l,
            fmt_prob(b.achieved),
        )
        .unwrap();
    }
    if plan.overlap_flagged() {
        writeln!(out, "note: overlapping subspaces were discarded from the family").unwrap();
    }
    out
}

fn cmd_pmax(
    finder: &dyn SubspaceFinder,
    state: &Path,
    target: &Path,
    protocol_out: Option<&Path>,
    json: bool,
) -> Result<String, CliError> {
    let rho = load_density(state)?;
    let phi = load_target(target)?;
    let plan = match protocol_out {
        Some(_) => full_plan_with(finder, &rho, &phi)?,
        None => pmax_mixed_with(finder, &rho, &phi)?,
    };
    if let Some(out) = protocol_out {
        write(out, &to_json(&serde_json::to_value(ProtocolFile::from_protocol(&plan.protocol())).unwrap()))?;
    }
    Ok(if json { to_json(&plan_json(&plan)) } else { plan_text(&plan) })
}

fn cmd_protocol(
    finder: &dyn SubspaceFinder,
    state: &Path,
    target: &Path,
    out: Option<&Path>,
    json: bool,
) -> Result<String, CliError> {
    let rho = load_density(state)?;
    let phi = load_target(target)?;
    let plan = full_plan_with(finder, &rho, &phi)?;
    let file = to_json(&serde_json::to_value(ProtocolFile::from_protocol(&plan.protocol())).unwrap());
    let Some(out) = out else { return Ok(file) };
    write(out, &file)?;
    if json {
        return Ok(to_json(&json!({
            "written": out.display().to_string(),
            "branches": plan.branches.len(),
            "p_max": plan.p_max,
            "branch_probability_total": plan.branch_probability_total(),
        })));
    }
    let mut text = String::new();
    writeln!(text, "wrote {}", out.display()).unwrap();
    for b in &plan.branches {
        writeln!(text, "  {}  probability {}", b.id, fmt_prob(b.probability)).unwrap();
    }
    writeln!(text, "total: {}", fmt_prob(plan.branch_probability_total())).unwrap();
    writeln!(text, "p_max: {}", fmt_prob(plan.p_max)).unwrap();
    Ok(text)
}

fn cmd_simulate(protocol: &Path, state: &Path, shots: u64, seed: u64, json: bool) -> Result<String, CliError> {
    let protocol = load_protocol(protocol)?;
    let rho = load_density(state)?;
    let result = simulate(&protocol, &rho, shots, seed)?;
    let analytic: f64 = protocol.branches.iter().map(|b| b.kraus.probability(rho.matrix())).sum();
    if json {
        let mut v = serde_json::to_value(&result).unwrap();
        v["analytic_probability"] = json!(analytic);
        return Ok(to_json(&v));
    }
    let mut out = String::new();
    writeln!(out, "shots: {}", result.shots).unwrap();
    writeln!(out, "successes: {}", result.successes).unwrap();
    writeln!(out, "empirical_probability: {}", fmt_prob(result.empirical_probability)).unwrap();
    writeln!(out, "standard_error: {}", fmt_prob(result.standard_error)).unwrap();
    writeln!(out, "analytic_probability: {}", fmt_prob(analytic)).unwrap();
    writeln!(out, "seed: {}", result.seed).unwrap();
    writeln!(out, "rng: {}", result.rng).unwrap();
    writeln!(out, "per_branch_counts:").unwrap();
    for (id, n) in &result.per_branch_counts {
        writeln!(out, "  {id}: {n}").unwrap();
    }
    Ok(out)
}

fn cmd_verify(protocol: &Path, state: &Path, target: &Path, json: bool) -> Result<String, CliError> {
    let protocol = load_protocol(protocol)?;
    let rho = load_density(state)?;
    let phi = load_target(target)?;
    if let Some(b) = protocol.branches.iter().find(|b| b.kraus.cols() != rho.dim() || b.kraus.rows() != phi.dim()) {
        return Err(CliError::Validation(format!(
            "branch `{}` maps dimension {} to {}, expected {} to {}",
            b.id,
            b.kraus.cols(),
            b.kraus.rows(),
            rho.dim(),
            phi.dim()
        )));
    }
    let verdict = verify_branch_outputs(&protocol, &rho, &phi);
    if json {
        return Ok(to_json(&match &verdict {
            BranchVerdict::Verified => json!({ "verified": true, "branches": protocol.branches.len() }),
            BranchVerdict::Failed { branch_id, fidelity } => {
                json!({ "verified": false, "branch_id": branch_id, "fidelity": fidelity })
            }
        }));
    }
    Ok(match verdict {
        BranchVerdict::Verified => format!("verified: true ({} branches)\n", protocol.branches.len()),
        BranchVerdict::Failed { branch_id, fidelity } => {
            format!("verified: false\nbranch: {branch_id}\nfidelity: {}\n", fmt_prob(fidelity))
        }
    })
}

fn enhancement_json(c: &EnhancementCheck) -> Value {
    json!({
        "indices": c.indices,
        "p_max": c.p_max,
        "bound": c.bound,
        "margin": c.margin,
        "enhanceable": c.enhanceable,
    })
}

fn alpha_json(a: f64) -> Value {
    // JSON has no infinities
    if a.is_finite() {
        json!(a)
    } else if a > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn catalysis_json(c: &CatalysisCheck) -> Value {
    json!({
        "indices": c.indices,
        "below_one": { "alpha": alpha_json(c.below_one.alpha), "margin": c.below_one.margin },
        "above_one": { "alpha": alpha_json(c.above_one.alpha), "margin": c.above_one.margin },
        "entropy_margin": c.entropy_margin,
        "zero_entry_support": c.zero_entry_support,
        "passes": c.passes,
    })
}

fn verdict_word(enhanceable: bool) -> &'static str {
    if enhanceable {
        "enhanceable"
    } else {
        "not enhanceable"
    }
}

fn cmd_catalyst_gate(
    finder: &dyn SubspaceFinder,
    state: &Path,
    target: &Path,
    alpha_points: usize,
    json: bool,
) -> Result<String, CliError> {
    if alpha_points < 3 {
        return Err(CliError::Precondition(format!("--alpha-points must be at least 3, got {alpha_points}")));
    }
    let rho = load_density(state)?;
    let phi = load_target(target)?;
    let grid = AlphaGrid::with_points(alpha_points);
    let report = catalyst_report(finder, &rho, &phi, &grid)?;
    let prob = &report.probabilistic;

    if json {
        let deterministic = match &report.deterministic {
            Ok(g) => json!({
                "applicable": true,
                "verdict": g.verdict,
                "total_weight": g.total_weight,
                "weight_deficient": g.weight_deficient,
                "checks": g.checks.iter().map(catalysis_json).collect::<Vec<_>>(),
                "worst": g.worst().map(|w| json!({ "alpha": alpha_json(w.alpha), "margin": w.margin })),
            }),
            Err(e) => json!({ "applicable": false, "reason": e.to_string() }),
        };
        return Ok(to_json(&json!({
            "baseline": report.baseline,
            "alpha_points": grid.len(),
            "probabilistic": {
                "family_verdict": prob.family_verdict,
                "all_verdict": prob.all_verdict,
                "family": prob.family.iter().map(enhancement_json).collect::<Vec<_>>(),
                "all_subspaces": prob.all_subspaces.iter().map(enhancement_json).collect::<Vec<_>>(),
            },
            "deterministic": deterministic,
        })));
    }

    let mut out = String::new();
    writeln!(out, "baseline p_max: {}", fmt_prob(report.baseline)).unwrap();
    writeln!(out, "probabilistic gate: {}", verdict_word(prob.family_verdict)).unwrap();
    for c in &prob.family {
        writeln!(
            out,
            "  {}  p_max {}  bound {}  margin {}",
            fmt_indices(&c.indices),
            fmt_prob(c.p_max),
            fmt_prob(c.bound),
            fmt_prob(c.margin)
        )
        .unwrap();
    }
    writeln!(out, "probabilistic gate (all subspaces): {}", verdict_word(prob.all_verdict)).unwrap();
    match &report.deterministic {
        Ok(g) => {
            writeln!(out, "deterministic gate: {}", g.verdict).unwrap();
            if g.weight_deficient {
                writeln!(out, "  family weight {} < 1", fmt_prob(g.total_weight)).unwrap();
            }
            for c in &g.checks {
                writeln!(
                    out,
                    "  {}  alpha<1 margin {} at {}  alpha>1 margin {} at {}  entropy margin {}{}",
                    fmt_indices(&c.indices),
                    fmt_prob(c.below_one.margin),
                    fmt_prob(c.below_one.alpha),
                    fmt_prob(c.above_one.margin),
                    fmt_prob(c.above_one.alpha),
                    fmt_prob(c.entropy_margin),
                    if c.zero_entry_support { "  (zero entries)" } else { "" },
                )
                .unwrap();
            }
            if let Some(w) = g.worst() {
                writeln!(out, "  minimum margin {} at alpha {}", fmt_prob(w.margin), fmt_prob(w.alpha)).unwrap();
            }
        }
        Err(e) => writeln!(out, "deterministic gate: not applicable ({e})").unwrap(),
    }
    Ok(out)
}

fn cmd_catalyst_search(
    finder: &dyn SubspaceFinder,
    state: &Path,
    target: &Path,
    max_dim: usize,
    step: f64,
    mode: &str,
    json: bool,
) -> Result<String, CliError> {
    let registry = objectives();
    let objective = registry.get(mode)?;
    let rho = load_density(state)?;
    let phi = load_target(target)?;
    let outcome = search_catalyst_with(finder, &rho, &phi, max_dim, step, objective)?;
    let candidates: usize = outcome.coverage.iter().map(|c| c.candidates).sum();

    if json {
        return Ok(to_json(&json!({
            "mode": outcome.objective,
            "baseline": outcome.baseline,
            "best": outcome.best.as_ref().map(|(c, a)| json!({ "catalyst": c, "achieved": a })),
            "found": outcome.found.as_ref().map(|(c, a)| json!({ "catalyst": c.as_slice(), "achieved": a })),
            "coverage": outcome.coverage.iter().map(|c| json!({ "dim": c.dim, "candidates": c.candidates })).collect::<Vec<_>>(),
        })));
    }
    let mut out = String::new();
    writeln!(out, "mode: {}", outcome.objective).unwrap();
    writeln!(out, "baseline p_max: {}", fmt_prob(outcome.baseline)).unwrap();
    match &outcome.found {
        Some((c, a)) => {
            writeln!(out, "catalyst: {}", fmt_list(c.as_slice(), |x| fmt_prob(*x))).unwrap();
            writeln!(out, "achieved: {}", fmt_prob(*a)).unwrap();
        }
        None => {
            writeln!(out, "no improvement found").unwrap();
            if let Some((c, a)) = &outcome.best {
                writeln!(out, "best candidate: {}  achieved {}", fmt_list(c, |x| fmt_prob(*x)), fmt_prob(*a)).unwrap();
            }
        }
    }
    let dims: Vec<String> = outcome.coverage.iter().map(|c| format!("k={}: {}", c.dim, c.candidates)).collect();
    writeln!(out, "coverage: {candidates} candidates ({})", dims.join(", ")).unwrap();
    Ok(out)
}

fn cmd_majorize(p_path: &Path, q_path: &Path, json: bool) -> Result<String, CliError> {
    let p = load_state(p_path)?.into_distribution(&p_path.display().to_string())?;
    let q = load_state(q_path)?.into_distribution(&q_path.display().to_string())?;
    let (p, q) = (p.as_slice(), q.as_slice());
    let p_below_q = majorizes(p, q);
    let q_below_p = majorizes(q, p);
    let (ratio, l) = min_cl_ratio(p, q);
    let (hp, hq) = (shannon_entropy(p), shannon_entropy(q));
    if json {
        return Ok(to_json(&json!({
            "p_majorized_by_q": p_below_q,
            "q_majorized_by_p": q_below_p,
            "entropy_p": hp,
            "entropy_q": hq,
            "min_cl_ratio": ratio,
            "minimizing_l": l,
        })));
    }
    let mut out = String::new();
    writeln!(out, "p majorized by q: {p_below_q}").unwrap();
    writeln!(out, "q majorized by p: {q_below_p}").unwrap();
    writeln!(out, "entropy p: {}", fmt_prob(hp)).unwrap();
    writeln!(out, "entropy q: {}", fmt_prob(hq)).unwrap();
    writeln!(out, "min C_l ratio (p -> q): {} at l = {l}", fmt_prob(ratio)).unwrap();
    Ok(out)
}
