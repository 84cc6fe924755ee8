//! Maximal distillation probabilities and explicit Kraus protocols.
//!
//! For a pure source `P_max(ψ → φ) = min_l C_l(ψ)/C_l(φ)`. For a mixed
//! source the probability is the weighted sum of that quantity over a
//! disjoint family of maximal pure subspaces, and the protocol measures the
//! subspace projectors and runs the pure-state protocol on each outcome.

mod kraus;
mod protocol;

pub use kraus::{completeness_diagonal, KrausDecomposition, KrausEntry, StrictlyIncoherentKraus};
pub use protocol::optimal_protocol;

use crate::error::{Error, Result};
use crate::measures::{cl_profile, coherence_rank};
use crate::registry::SubspaceFinder;
use crate::states::{DensityMatrix, PureStateVector};
use crate::subspaces::{select_disjoint_family, CliqueFinder, DisjointFamily, PureSubspace};

/// Tolerance for plan-level probability and completeness invariants.
pub const PLAN_TOL: f64 = 1e-9;

/// `min_l C_l(ψ)/C_l(φ)` and the 1-based minimizing `l`.
///
/// Profiles are zero-padded to a common length; `C_l(φ) = 0` terms are
/// skipped and `C_l(ψ) = 0 < C_l(φ)` contributes a zero ratio.
pub fn pmax_pure_detail(psi: &PureStateVector, phi: &PureStateVector) -> (f64, usize) {
    let cp = cl_profile(psi);
    let cq = cl_profile(phi);
    let n = cp.values().len().max(cq.values().len());
    let mut best = (1.0f64, 1usize);
    let mut first = true;
    for l in 1..=n {
        let denom = cq.get(l);
        if denom == 0.0 {
            continue;
        }
        let ratio = cp.get(l) / denom;
        if first || ratio < best.0 {
            best = (ratio, l);
            first = false;
        }
    }
    (best.0.clamp(0.0, 1.0), best.1)
}

pub fn pmax_pure(psi: &PureStateVector, phi: &PureStateVector) -> f64 {
    pmax_pure_detail(psi, phi).0
}

/// Single Kraus operator `K = k · diag(a) · U^dag · P` mapping the subspace
/// state onto φ, aligned by sorted modulus, with `|k| = 1 / max_i |a_i|`.
///
/// Its success probability is `min_i |ψ_i|²/|φ_i|²` over the aligned
/// support of φ.
pub fn saturating_kraus(subspace: &PureSubspace, phi: &PureStateVector) -> Result<StrictlyIncoherentKraus> {
    single_kraus(subspace.state(), phi)
}

/// [`saturating_kraus`] for a bare pure state.
pub fn single_kraus(psi: &PureStateVector, phi: &PureStateVector) -> Result<StrictlyIncoherentKraus> {
    let source = psi.support_by_modulus();
    let target = phi.support_by_modulus();
    if target.len() > source.len() {
        return Err(Error::RankDeficit { source_rank: source.len(), target_rank: target.len() });
    }
    let ratios: Vec<_> =
        target.iter().zip(&source).map(|(&t, &s)| phi.amplitude(t) / psi.amplitude(s)).collect();
    let max_modulus = ratios.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let k = 1.0 / max_modulus;
    let entries = target
        .iter()
        .zip(&source)
        .zip(&ratios)
        .map(|((&row, &col), &a)| KrausEntry { row, col, value: a * k })
        .collect();
    StrictlyIncoherentKraus::new(phi.dim(), psi.dim(), entries)
}

/// Per-subspace line of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSummary {
    pub indices: Vec<usize>,
    /// p_μ.
    pub weight: f64,
    /// `min_l C_l(ψ_μ)/C_l(φ)`.
    pub min_ratio: f64,
    /// 1-based minimizing `l`.
    pub minimizing_l: usize,
    /// `p_μ · min_ratio`.
    pub achieved: f64,
}

/// A success branch of a synthesized protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub id: String,
    /// Position of the originating subspace within the family.
    pub subspace: usize,
    pub kraus: StrictlyIncoherentKraus,
    /// `Tr(K ρ K^dag)`.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistillationPlan {
    /// Every maximal pure subspace reported by the finder.
    pub subspaces: Vec<PureSubspace>,
    /// The disjoint family actually measured.
    pub family: DisjointFamily,
    pub per_branch: Vec<BranchSummary>,
    pub p_max: f64,
    /// Empty unless the plan was synthesized by [`full_plan`].
    pub branches: Vec<Branch>,
}

impl DistillationPlan {
    pub fn branch_probability_total(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Largest eigenvalue of `Σ K^dag K` over all success branches.
    pub fn completeness(&self) -> f64 {
        let Some(first) = self.branches.first() else { return 0.0 };
        completeness_diagonal(first.kraus.cols(), self.branches.iter().map(|b| &b.kraus))
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn protocol(&self) -> Protocol {
        Protocol { branches: self.branches.clone(), p_max: self.p_max, family: self.family.index_sets() }
    }

    /// True when some maximal subspaces overlap, so the disjoint family had
    /// to drop at least one.
    pub fn overlap_flagged(&self) -> bool {
        self.family.discarded > 0
    }
}

fn check_target(phi: &PureStateVector) -> Result<()> {
    if coherence_rank(phi) < 2 {
        return Err(Error::IncoherentTarget);
    }
    Ok(())
}

/// Maximal probability of distilling φ from ρ (probability part of a plan).
pub fn pmax_mixed(rho: &DensityMatrix, phi: &PureStateVector) -> Result<DistillationPlan> {
    pmax_mixed_with(&CliqueFinder, rho, phi)
}

pub fn pmax_mixed_with(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
) -> Result<DistillationPlan> {
    check_target(phi)?;
    let subspaces = finder.find(rho)?;
    Ok(plan_from_subspaces(subspaces, phi))
}

/// The executable part of a plan: success branches plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub branches: Vec<Branch>,
    pub p_max: f64,
    pub family: Vec<Vec<usize>>,
}

impl Protocol {
    /// Rejects protocols whose `Σ K^dag K` exceeds the identity or whose
    /// operators disagree on the input dimension.
    pub fn check_complete(&self) -> Result<()> {
        let Some(first) = self.branches.first() else { return Ok(()) };
        let cols = first.kraus.cols();
        if let Some(b) = self.branches.iter().find(|b| b.kraus.cols() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "branch `{}` acts on dimension {} but `{}` on {cols}",
                b.id,
                b.kraus.cols(),
                first.id
            )));
        }
        let max_eigenvalue = completeness_diagonal(cols, self.branches.iter().map(|b| &b.kraus))
            .into_iter()
            .fold(0.0, f64::max);
        if max_eigenvalue > 1.0 + PLAN_TOL {
            return Err(Error::IncompletePlan { max_eigenvalue });
        }
        Ok(())
    }
}

/// Probability part of a plan for an already enumerated subspace list.
pub fn plan_from_subspaces(subspaces: Vec<PureSubspace>, phi: &PureStateVector) -> DistillationPlan {
    let family = select_disjoint_family(&subspaces, phi);
    let per_branch: Vec<BranchSummary> = family
        .members
        .iter()
        .map(|s| {
            let (min_ratio, minimizing_l) = pmax_pure_detail(s.state(), phi);
            BranchSummary {
                indices: s.indices().to_vec(),
                weight: s.weight(),
                min_ratio,
                minimizing_l,
                achieved: s.weight() * min_ratio,
            }
        })
        .collect();
    let p_max = per_branch.iter().map(|b| b.achieved).sum();
    DistillationPlan { subspaces, family, per_branch, p_max, branches: Vec::new() }
}

/// Probability plus an explicit strictly incoherent protocol.
pub fn full_plan(rho: &DensityMatrix, phi: &PureStateVector) -> Result<DistillationPlan> {
    full_plan_with(&CliqueFinder, rho, phi)
}

pub fn full_plan_with(
    finder: &dyn SubspaceFinder,
    rho: &DensityMatrix,
    phi: &PureStateVector,
) -> Result<DistillationPlan> {
    let mut plan = pmax_mixed_with(finder, rho, phi)?;
    let target_rank = coherence_rank(phi);
    for (mu, member) in plan.family.members.iter().enumerate() {
        if member.coherence_rank() < target_rank {
            continue;
        }
        // columns of each K lie inside the subspace, so K = K·P_μ
        for (n, (kraus, _)) in optimal_protocol(member.state(), phi)?.into_iter().enumerate() {
            let probability = kraus.probability(rho.matrix());
            plan.branches.push(Branch { id: format!("s{mu}.b{n}"), subspace: mu, kraus, probability });
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::ProbabilityVector;

    fn profile(p: &[f64]) -> PureStateVector {
        PureStateVector::from_profile(p).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn pmax_pure_examples() {
        let psi = profile(&[0.5, 0.3, 0.2]);
        assert!(close(pmax_pure(&psi, &psi), 1.0));
        assert!(close(pmax_pure(&psi, &profile(&[1.0 / 3.0; 3])), 0.6));
        let (p, l) = pmax_pure_detail(&profile(&[0.4, 0.4, 0.1, 0.1]), &profile(&[0.5, 0.25, 0.25]));
        assert!(close(p, 0.8));
        assert_eq!(l, 3);
    }

    #[test]
    fn single_kraus_examples() {
        let psi = profile(&[0.5, 0.5]);
        let k = single_kraus(&psi, &psi).unwrap();
        assert!((k.matrix() - crate::linalg::CMatrix::identity(2, 2)).norm() < 1e-12);

        let phi = profile(&[0.9, 0.1]);
        let k = single_kraus(&psi, &phi).unwrap();
        let out = k.apply(psi.amplitudes());
        let prob: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        assert!(close(prob, 5.0 / 9.0));
        assert!(close(k.entries()[0].value.norm(), 1.0));
        assert!(close(k.entries()[1].value.norm(), (0.2f64 / 1.8).sqrt()));

        let k = single_kraus(&phi, &psi).unwrap();
        let prob: f64 = k.apply(phi.amplitudes()).iter().map(|z| z.norm_sqr()).sum();
        assert!(close(prob, 0.2));
        assert!(close(prob, pmax_pure(&phi, &psi)));

        assert!(matches!(
            single_kraus(&profile(&[1.0, 0.0]), &psi),
            Err(Error::RankDeficit { source_rank: 1, target_rank: 2 })
        ));
    }

    #[test]
    fn optimal_protocol_examples() {
        let psi = profile(&[0.5, 0.3, 0.2]);
        let same = optimal_protocol(&psi, &psi).unwrap();
        assert_eq!(same.len(), 1);
        assert!(close(same[0].1, 1.0));

        let uniform = profile(&[1.0 / 3.0; 3]);
        let total: f64 = optimal_protocol(&psi, &uniform).unwrap().iter().map(|b| b.1).sum();
        assert!(close(total, 0.6));

        let psi = profile(&[0.5, 0.26, 0.24]);
        let phi = profile(&[0.4, 0.35, 0.25]);
        let branches = optimal_protocol(&psi, &phi).unwrap();
        let total: f64 = branches.iter().map(|b| b.1).sum();
        assert!(close(total, 5.0 / 6.0));
        assert!(branches.len() >= 2);
    }

    #[test]
    fn pmax_mixed_examples() {
        let psi = profile(&[1.0 / 3.0, 0.4, 0.2666666666666667]);
        assert!(close(pmax_mixed(&psi.density(), &psi).unwrap().p_max, 1.0));

        // 0.5 (pure on {0,1} with 0.9/0.1) ⊕ 0.5 |2><2|
        let a = [0.9f64.sqrt(), 0.1f64.sqrt()];
        let rho = DensityMatrix::from_real_rows(&[
            vec![0.5 * a[0] * a[0], 0.5 * a[0] * a[1], 0.0],
            vec![0.5 * a[1] * a[0], 0.5 * a[1] * a[1], 0.0],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap();
        let phi = profile(&[0.5, 0.5]);
        let plan = pmax_mixed(&rho, &phi).unwrap();
        assert!(close(plan.p_max, 0.1));
        assert_eq!(plan.per_branch.len(), 2);

        let mixed = DensityMatrix::diagonal(&ProbabilityVector::uniform(2));
        assert_eq!(pmax_mixed(&mixed, &phi).unwrap().p_max, 0.0);

        assert!(matches!(pmax_mixed(&mixed, &profile(&[1.0, 0.0])), Err(Error::IncoherentTarget)));
    }

    #[test]
    fn full_plan_examples() {
        let mixed = DensityMatrix::diagonal(&ProbabilityVector::uniform(2));
        let phi = profile(&[0.5, 0.5]);
        let plan = full_plan(&mixed, &phi).unwrap();
        assert!(plan.branches.is_empty());
        assert_eq!(plan.p_max, 0.0);

        let psi = profile(&[0.5, 0.3, 0.2]);
        let uniform = profile(&[1.0 / 3.0; 3]);
        let plan = full_plan(&psi.density(), &uniform).unwrap();
        let direct = optimal_protocol(&psi, &uniform).unwrap();
        assert_eq!(plan.branches.len(), direct.len());
        assert!(close(plan.branch_probability_total(), 0.6));
        assert!(plan.completeness() <= 1.0 + PLAN_TOL);
    }
}
