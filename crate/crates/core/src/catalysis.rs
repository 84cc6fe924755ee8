//! Catalyst existence gates and an explicit grid search for catalysts.
//!
//! A catalyst is a pure state whose squared-amplitude profile `c` is
//! appended to both sides: `ρ ⊗ c → φ ⊗ c`. For a fully supported `c` the
//! maximal pure subspaces of `ρ ⊗ c` are the products of those of `ρ` with
//! the catalyst support, so catalytic probabilities are evaluated on
//! product profiles without rebuilding the `d·k` dimensional state.

use rayon::prelude::*;

use crate::distill::{pmax_mixed_with, DistillationPlan};
use crate::error::{Error, Result};
use crate::measures::{min_cl_ratio, power_mean, shannon_entropy, tensor};
use crate::registry::{CatalystObjective, SubspaceFinder};
use crate::states::{DensityMatrix, ProbabilityVector, PureStateVector};
use crate::subspaces::{best_disjoint_selection, CliqueFinder, PureSubspace};

/// Margin a strict inequality must clear to count as satisfied.
pub const GATE_TOL: f64 = 1e-12;
/// Improvement / unit-probability tolerance for catalyst acceptance.
pub const CATALYST_TOL: f64 = 1e-9;

/// Search objective `probabilistic`: any strict improvement over baseline.
#[derive(Debug, Default, Clone, Copy)]
pub struct Probabilistic;

impl CatalystObjective for Probabilistic {
    fn name(&self) -> &'static str {
        "probabilistic"
    }

    fn accepts(&self, achieved: f64, baseline: f64) -> bool {
        achieved > baseline + CATALYST_TOL
    }

    fn stops_at_first(&self) -> bool {
        false
    }
}

/// Search objective `deterministic`: the catalyzed probability reaches one.
#[derive(Debug, Default, Clone, Copy)]
pub struct Deterministic;

impl CatalystObjective for Deterministic {
    fn name(&self) -> &'static str {
        "deterministic"
    }

    fn accepts(&self, achieved: f64, _baseline: f64) -> bool {
        achieved >= 1.0 - CATALYST_TOL
    }

    fn stops_at_first(&self) -> bool {
        true
    }

    fn check_baseline(&self, baseline: f64) -> Result<()> {
        if baseline >= 1.0 - CATALYST_TOL {
            return Err(Error::Precondition(format!(
                "P_max = {baseline} already reaches 1; no catalyst needed"
            )));
        }
        Ok(())
    }
}

/// Nonzero squared moduli, sorted nonincreasing.
fn nonzero_profile(psi: &PureStateVector) -> Vec<f64> {
    psi.sorted_profile().into_iter().filter(|&x| x > 0.0).collect()
}

fn padded(mut v: Vec<f64>, n: usize) -> Vec<f64> {
    v.resize(n, 0.0);
    v
}

// ---------------------------------------------------------------------------
// Probabilistic enhancement gate

#[derive(Debug, Clone, PartialEq)]
pub struct EnhancementCheck {
    pub indices: Vec<usize>,
    pub p_max: f64,
    /// `min{ψ_n²/φ_n², 1}` at `n = max{n_1, n_2}`.
    pub bound: f64,
    /// `bound - p_max`.
    pub margin: f64,
    pub enhanceable: bool,
}

/// Per-subspace checks over the disjoint family and over every maximal
/// subspace; verdicts are reported for both collections.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticGate {
    pub family: Vec<EnhancementCheck>,
    pub all_subspaces: Vec<EnhancementCheck>,
    pub family_verdict: bool,
    pub all_verdict: bool,
}

/// Whether a catalyst can raise `P_max(ψ → φ)` for a pure pair.
pub fn enhancement_check(psi: &PureStateVector, phi: &PureStateVector) -> EnhancementCheck {
    let p = nonzero_profile(psi);
    let q = nonzero_profile(phi);
    let n = p.len().max(q.len());
    let (p_max, _) = min_cl_ratio(&p, &q);
    let (pn, qn) = (padded(p, n)[n - 1], padded(q, n)[n - 1]);
    let bound = if qn == 0.0 {
        1.0
    } else if pn == 0.0 {
        0.0
    } else {
        (pn / qn).min(1.0)
    };
    let margin = bound - p_max;
    EnhancementCheck {
        indices: psi.support(),
        p_max,
        bound,
        margin,
        enhanceable: margin > CATALYST_TOL,
    }
}

fn check_subspace(s: &PureSubspace, phi: &PureStateVector) -> EnhancementCheck {
    EnhancementCheck { indices: s.indices().to_vec(), ..enhancement_check(s.state(), phi) }
}

pub fn gate_probabilistic(rho: &DensityMatrix, phi: &PureStateVector) -> Result<ProbabilisticGate> {
    gate_probabilistic_with(&CliqueFinder, rho, phi)
}

pub fn gate_probabilistic_with(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
) -> Result<ProbabilisticGate> {
    let plan = pmax_mixed_with(finder, rho, phi)?;
    Ok(probabilistic_gate_for(&plan, phi))
}

fn probabilistic_gate_for(plan: &DistillationPlan, phi: &PureStateVector) -> ProbabilisticGate {
    let family: Vec<_> = plan.family.members.iter().map(|s| check_subspace(s, phi)).collect();
    let all_subspaces: Vec<_> = plan.subspaces.iter().map(|s| check_subspace(s, phi)).collect();
    ProbabilisticGate {
        family_verdict: family.iter().any(|c| c.enhanceable),
        all_verdict: all_subspaces.iter().any(|c| c.enhanceable),
        family,
        all_subspaces,
    }
}

// ---------------------------------------------------------------------------
// Deterministic catalysis gate

/// Exponents at which the power-mean conditions are sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    /// Exponents below one, including 0 and -inf.
    pub below_one: Vec<f64>,
    /// Exponents above one, including +inf.
    pub above_one: Vec<f64>,
}

impl AlphaGrid {
    /// `points` log-spaced exponents split evenly across [-40, -0.01],
    /// [0.01, 0.99] and [1.01, 40], plus 0 and ±inf.
    pub fn with_points(points: usize) -> Self {
        let per = (points / 3).max(2);
        let mut below_one = vec![f64::NEG_INFINITY];
        below_one.extend(logspace(0.01, 40.0, per).into_iter().rev().map(|a| -a));
        below_one.push(0.0);
        below_one.extend(logspace(0.01, 0.99, per));
        let mut above_one = logspace(1.01, 40.0, per);
        above_one.push(f64::INFINITY);
        Self { below_one, above_one }
    }

    pub fn len(&self) -> usize {
        self.below_one.len() + self.above_one.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self::with_points(60)
    }
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMargin {
    pub alpha: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalysisCheck {
    pub indices: Vec<usize>,
    /// Worst `A_α(Δψ) - A_α(Δφ)` over α < 1.
    pub below_one: AlphaMargin,
    /// Worst `A_α(Δφ) - A_α(Δψ)` over α > 1.
    pub above_one: AlphaMargin,
    /// `S(Δψ) - S(Δφ)`.
    pub entropy_margin: f64,
    /// Δψ has a zero entry on the joint support, which fails α ≤ 0.
    pub zero_entry_support: bool,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicGate {
    pub baseline: f64,
    pub checks: Vec<CatalysisCheck>,
    pub total_weight: f64,
    /// Selected subspaces carry less than unit weight, so no catalyst can
    /// make the transformation certain.
    pub weight_deficient: bool,
    pub verdict: bool,
}

impl DeterministicGate {
    /// The overall minimum margin across subspaces and condition families.
    pub fn worst(&self) -> Option<AlphaMargin> {
        self.checks
            .iter()
            .flat_map(|c| [c.below_one, c.above_one])
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }
}

/// Samples the power-mean and entropy conditions for one pure pair.
pub fn catalysis_check(psi: &PureStateVector, phi: &PureStateVector, grid: &AlphaGrid) -> CatalysisCheck {
    let p0 = nonzero_profile(psi);
    let q0 = nonzero_profile(phi);
    let n = p0.len().max(q0.len());
    let zero_entry_support = p0.len() < n;
    let p = padded(p0, n);
    let q = padded(q0, n);

    let below = |a: f64| power_mean(&p, a) - power_mean(&q, a);
    let above = |a: f64| power_mean(&q, a) - power_mean(&p, a);
    let below_one = refine(&grid.below_one, below, f64::NEG_INFINITY, 1.0);
    let above_one = refine(&grid.above_one, above, 1.0, f64::INFINITY);
    let entropy_margin = shannon_entropy(&p) - shannon_entropy(&q);
    let passes = !zero_entry_support
        && below_one.margin > GATE_TOL
        && above_one.margin > GATE_TOL
        && entropy_margin > GATE_TOL;
    CatalysisCheck { indices: psi.support(), below_one, above_one, entropy_margin, zero_entry_support, passes }
}

/// Minimum of `f` over `grid`, then repeated halving of the bracket around
/// the minimizer (kept strictly inside `(lo, hi)`).
fn refine(grid: &[f64], f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> AlphaMargin {
    let vals: Vec<f64> = grid.iter().map(|&a| f(a)).collect();
    let Some(i) = (0..grid.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])) else {
        return AlphaMargin { alpha: f64::NAN, margin: f64::INFINITY };
    };
    let mut best = AlphaMargin { alpha: grid[i], margin: vals[i] };
    if !best.alpha.is_finite() {
        return best;
    }
    let mut left = if i > 0 && grid[i - 1].is_finite() { grid[i - 1] } else { best.alpha };
    let mut right = if i + 1 < grid.len() && grid[i + 1].is_finite() { grid[i + 1] } else { best.alpha };
    for _ in 0..12 {
        for cand in [(left + best.alpha) / 2.0, (best.alpha + right) / 2.0] {
            if cand > lo && cand < hi {
                let m = f(cand);
                if m < best.margin {
                    best = AlphaMargin { alpha: cand, margin: m };
                }
            }
        }
        left = (left + best.alpha) / 2.0;
        right = (right + best.alpha) / 2.0;
    }
    best
}

pub fn gate_deterministic(
    rho: &DensityMatrix,
    phi: &PureStateVector,
    grid: &AlphaGrid,
) -> Result<DeterministicGate> {
    gate_deterministic_with(&CliqueFinder, rho, phi, grid)
}

pub fn gate_deterministic_with(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
    grid: &AlphaGrid,
) -> Result<DeterministicGate> {
    let plan = pmax_mixed_with(finder, rho, phi)?;
    deterministic_gate_for(&plan, phi, grid)
}

fn deterministic_gate_for(
    plan: &DistillationPlan,
    phi: &PureStateVector,
    grid: &AlphaGrid,
) -> Result<DeterministicGate> {
    Deterministic.check_baseline(plan.p_max)?;
    let checks: Vec<CatalysisCheck> = plan
        .family
        .members
        .iter()
        .map(|s| CatalysisCheck { indices: s.indices().to_vec(), ..catalysis_check(s.state(), phi, grid) })
        .collect();
    let total_weight = plan.family.total_weight;
    let weight_deficient = (total_weight - 1.0).abs() > CATALYST_TOL;
    let verdict = !checks.is_empty() && !weight_deficient && checks.iter().all(|c| c.passes);
    Ok(DeterministicGate { baseline: plan.p_max, checks, total_weight, weight_deficient, verdict })
}

// ---------------------------------------------------------------------------
// Catalyst search

/// `P_max(ρ ⊗ c → φ ⊗ c)` from the maximal subspaces of ρ and a fully
/// supported catalyst profile `c`.
pub fn pmax_with_catalyst(subspaces: &[PureSubspace], phi: &PureStateVector, catalyst: &[f64]) -> f64 {
    let target = tensor(&phi.squared_moduli(), catalyst);
    let values: Vec<f64> = subspaces
        .iter()
        .map(|s| s.weight() * min_cl_ratio(&tensor(&s.state().squared_moduli(), catalyst), &target).0)
        .collect();
    let sets: Vec<Vec<usize>> = subspaces.iter().map(|s| s.indices().to_vec()).collect();
    best_disjoint_selection(&sets, &values).iter().map(|&i| values[i]).sum()
}

/// The same quantity through the full `d·k` dimensional state and its own
/// subspace enumeration.
pub fn pmax_with_catalyst_full(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
    catalyst: &ProbabilityVector,
) -> Result<f64> {
    let c = PureStateVector::from_profile(catalyst.as_slice())?;
    let rho_c = rho.tensor(&c.density());
    Ok(pmax_mixed_with(finder, &rho_c, &phi.tensor(&c))?.p_max)
}

/// Candidate count per catalyst dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub dim: usize,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub objective: &'static str,
    pub baseline: f64,
    /// Best catalyst seen and its probability, whether or not accepted.
    pub best: Option<(Vec<f64>, f64)>,
    /// Present only when the objective accepts the best candidate.
    pub found: Option<(ProbabilityVector, f64)>,
    pub coverage: Vec<Coverage>,
}

/// Sorted compositions `m_1 ≥ … ≥ m_k ≥ 1` of `total` into `k` parts, in
/// lexicographically descending order.
fn sorted_compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, parts: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = cap.min(remaining - (parts - 1));
        let lo = remaining.div_ceil(parts);
        for m in (lo..=hi).rev() {
            cur.push(m);
            rec(remaining - m, parts - 1, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && total >= k {
        rec(total, k, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Grid search over sorted catalyst profiles of dimension `2..=max_dim`
/// whose entries are multiples of `step`.
pub fn search_catalyst(
    rho: &DensityMatrix,
    phi: &PureStateVector,
    max_dim: usize,
    step: f64,
    objective: &dyn CatalystObjective,
) -> Result<SearchOutcome> {
    search_catalyst_with(&CliqueFinder, rho, phi, max_dim, step, objective)
}

pub fn search_catalyst_with(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
    max_dim: usize,
    step: f64,
    objective: &dyn CatalystObjective,
) -> Result<SearchOutcome> {
    if max_dim < 2 {
        return Err(Error::Precondition(format!("max_dim must be at least 2, got {max_dim}")));
    }
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::Precondition(format!("step must lie in (0, 0.5], got {step}")));
    }
    let plan = pmax_mixed_with(finder, rho, phi)?;
    search_for_plan(&plan, phi, max_dim, step, objective)
}

fn search_for_plan(
    plan: &DistillationPlan,
    phi: &PureStateVector,
    max_dim: usize,
    step: f64,
    objective: &dyn CatalystObjective,
) -> Result<SearchOutcome> {
    let baseline = pmax_with_catalyst(&plan.subspaces, phi, &[1.0]);
    objective.check_baseline(baseline)?;
    let units = (1.0 / step).round() as usize;

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut first_accepted: Option<(Vec<f64>, f64)> = None;
    let mut coverage = Vec::new();
    for k in 2..=max_dim {
        let grid = sorted_compositions(units, k);
        coverage.push(Coverage { dim: k, candidates: grid.len() });
        let scored: Vec<(Vec<f64>, f64)> = grid
            .par_iter()
            .map(|m| {
                let c: Vec<f64> = m.iter().map(|&x| x as f64 / units as f64).collect();
                let achieved = pmax_with_catalyst(&plan.subspaces, phi, &c);
                (c, achieved)
            })
            .collect();
        for (c, achieved) in scored {
            if first_accepted.is_none() && objective.accepts(achieved, baseline) {
                first_accepted = Some((c.clone(), achieved));
            }
            let replace = match &best {
                None => true,
                Some((bc, ba)) => {
                    achieved > ba + GATE_TOL
                        || ((achieved - ba).abs() <= GATE_TOL && c.partial_cmp(bc) == Some(std::cmp::Ordering::Less))
                }
            };
            if replace {
                best = Some((c, achieved));
            }
        }
        if objective.stops_at_first() && first_accepted.is_some() {
            break;
        }
    }

    let chosen = if objective.stops_at_first() {
        first_accepted
    } else {
        best.clone().filter(|(_, a)| objective.accepts(*a, baseline))
    };
    let found = chosen.map(|(c, a)| (ProbabilityVector::new(c).expect("grid point is a distribution"), a));
    Ok(SearchOutcome { objective: objective.name(), baseline, best, found, coverage })
}

/// Everything the catalyst commands report.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalystReport {
    pub baseline: f64,
    pub probabilistic: ProbabilisticGate,
    /// `Err` carries the reason the deterministic gate does not apply.
    pub deterministic: std::result::Result<DeterministicGate, Error>,
}

pub fn catalyst_report(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
    grid: &AlphaGrid,
) -> Result<CatalystReport> {
    let plan = pmax_mixed_with(finder, rho, phi)?;
    Ok(CatalystReport {
        baseline: plan.p_max,
        probabilistic: probabilistic_gate_for(&plan, phi),
        deterministic: deterministic_gate_for(&plan, phi, grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::majorizes;

    fn profile(p: &[f64]) -> PureStateVector {
        PureStateVector::from_profile(p).unwrap()
    }

    fn canonical() -> (PureStateVector, PureStateVector) {
        (profile(&[0.4, 0.4, 0.1, 0.1]), profile(&[0.5, 0.25, 0.25]))
    }

    #[test]
    fn enhancement_examples() {
        let (psi, phi) = canonical();
        let c = enhancement_check(&psi, &phi);
        assert!((c.p_max - 0.8).abs() < 1e-12);
        assert_eq!(c.bound, 1.0);
        assert!(c.enhanceable);

        let c = enhancement_check(&psi, &psi);
        assert!(!c.enhanceable);

        let c = enhancement_check(&profile(&[0.5, 0.5]), &profile(&[0.9, 0.1]));
        assert!((c.p_max - 1.0).abs() < 1e-12);
        assert!(!c.enhanceable);
    }

    #[test]
    fn gate_requires_coherent_target() {
        let (psi, _) = canonical();
        assert!(matches!(
            gate_probabilistic(&psi.density(), &profile(&[1.0])),
            Err(Error::IncoherentTarget)
        ));
    }

    #[test]
    fn deterministic_gate_examples() {
        let (psi, phi) = canonical();
        let gate = gate_deterministic(&psi.density(), &phi, &AlphaGrid::default()).unwrap();
        assert!(gate.verdict);
        let check = &gate.checks[0];
        assert!((shannon_entropy(&[0.4, 0.4, 0.1, 0.1]) - 1.19355).abs() < 1e-4);
        assert!((check.entropy_margin - (1.19355 - 1.03972)).abs() < 1e-4);

        // identical profiles: precondition (P_max = 1) is violated
        assert!(matches!(
            gate_deterministic(&psi.density(), &psi, &AlphaGrid::default()),
            Err(Error::Precondition(_))
        ));
        // equal profiles fail the strict inequalities at the check level
        let eq = catalysis_check(&psi, &psi, &AlphaGrid::default());
        assert!(!eq.passes);
        // majorized pair: deterministic already possible
        assert!(matches!(
            gate_deterministic(&profile(&[0.5, 0.5]).density(), &profile(&[0.9, 0.1]), &AlphaGrid::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn alpha_grid_layout() {
        let g = AlphaGrid::default();
        assert_eq!(g.len(), 63);
        assert!(g.below_one.iter().all(|&a| a < 1.0));
        assert!(g.above_one.iter().all(|&a| a > 1.0));
        assert!(g.below_one.contains(&0.0) && g.below_one.contains(&f64::NEG_INFINITY));
        assert!(g.above_one.contains(&f64::INFINITY));
    }

    #[test]
    fn compositions_are_sorted_and_complete() {
        let c = sorted_compositions(5, 2);
        assert_eq!(c, vec![vec![4, 1], vec![3, 2]]);
        assert_eq!(sorted_compositions(6, 3), vec![vec![4, 1, 1], vec![3, 2, 1], vec![2, 2, 2]]);
        assert!(sorted_compositions(2, 3).is_empty());
    }

    #[test]
    fn search_finds_canonical_catalyst() {
        let (psi, phi) = canonical();
        let out = search_catalyst(&psi.density(), &phi, 2, 0.05, &Probabilistic).unwrap();
        let (c, achieved) = out.found.expect("catalyst");
        assert!((achieved - 1.0).abs() < 1e-9);
        assert_eq!(c.len(), 2);
        assert!((out.baseline - 0.8).abs() < 1e-12);
        // (0.6, 0.4) is one of the catalysts reaching 1
        let direct = pmax_with_catalyst(&[PureSubspace::from_parts(vec![0, 1, 2, 3], 1.0, psi.clone())], &phi, &[0.6, 0.4]);
        assert!((direct - 1.0).abs() < 1e-12);
        assert!(majorizes(&tensor(&[0.4, 0.4, 0.1, 0.1], c.as_slice()), &tensor(&[0.5, 0.25, 0.25], c.as_slice())));

        let det = search_catalyst(&psi.density(), &phi, 2, 0.05, &Deterministic).unwrap();
        assert!(det.found.is_some());
    }

    #[test]
    fn search_cannot_beat_unit_probability() {
        let psi = profile(&[0.5, 0.5]);
        let phi = profile(&[0.9, 0.1]);
        let out = search_catalyst(&psi.density(), &phi, 3, 0.1, &Probabilistic).unwrap();
        assert!(out.found.is_none());
        assert!(matches!(search_catalyst(&psi.density(), &phi, 3, 0.1, &Deterministic), Err(Error::Precondition(_))));
    }

    #[test]
    fn search_rejects_bad_parameters() {
        let (psi, phi) = canonical();
        assert!(search_catalyst(&psi.density(), &phi, 1, 0.1, &Probabilistic).is_err());
        assert!(search_catalyst(&psi.density(), &phi, 2, 0.0, &Probabilistic).is_err());
        assert!(search_catalyst(&psi.density(), &phi, 2, 0.6, &Probabilistic).is_err());
    }

    #[test]
    fn identity_catalyst_is_neutral() {
        let (psi, phi) = canonical();
        let plan = crate::distill::pmax_mixed(&psi.density(), &phi).unwrap();
        assert_eq!(pmax_with_catalyst(&plan.subspaces, &phi, &[1.0]), plan.p_max);
    }
}
