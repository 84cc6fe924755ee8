//! Independent ground truth: exhaustive subspace search, Monte Carlo
//! execution of protocols, branch-output verification and a structured
//! random-state generator.

use std::collections::{BTreeMap, HashSet};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distill::Protocol;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::registry::SubspaceFinder;
use crate::states::{DensityMatrix, PureStateVector, AMPLITUDE_EPS};
use crate::subspaces::{sort_subspaces, PureSubspace, RANK1_TOL};

/// Largest dimension `brute_subspaces` will enumerate.
pub const BRUTE_LIMIT: usize = 16;
/// Fidelity slack for branch-output verification.
pub const FIDELITY_TOL: f64 = 1e-9;
/// Shots are split into this many independently seeded streams.
const SIM_CHUNKS: u64 = 16;
pub const RNG_ALGORITHM: &str = "ChaCha20 (one stream per chunk)";

/// Maximal pure subspaces by checking every subset of the populated
/// indices for a rank-1 restriction.
pub fn brute_subspaces(rho: &DensityMatrix) -> Result<Vec<PureSubspace>> {
    let d = rho.dim();
    if d > BRUTE_LIMIT {
        return Err(Error::DimensionTooLarge { dim: d, limit: BRUTE_LIMIT });
    }
    let support: Vec<usize> = (0..d).filter(|&i| rho.get(i, i).re > AMPLITUDE_EPS).collect();
    if support.is_empty() {
        return Err(Error::DegenerateState);
    }
    let n = support.len();
    let members = |mask: u32| -> Vec<usize> { (0..n).filter(|b| mask >> b & 1 == 1).map(|b| support[b]).collect() };

    let pure: HashSet<u32> = (1u32..(1 << n)).filter(|&mask| restriction_is_pure(rho, &members(mask))).collect();
    let mut out = Vec::new();
    for &mask in &pure {
        let extendable = (0..n).any(|b| mask >> b & 1 == 0 && pure.contains(&(mask | 1 << b)));
        if !extendable {
            out.push(PureSubspace::from_indices(rho, &members(mask))?);
        }
    }
    sort_subspaces(&mut out);
    Ok(out)
}

fn restriction_is_pure(rho: &DensityMatrix, idx: &[usize]) -> bool {
    if idx.len() == 1 {
        return true;
    }
    let r = CMatrix::from_fn(idx.len(), idx.len(), |a, b| rho.get(idx[a], idx[b]));
    let trace = r.trace().re;
    let values = hermitian_eigenvalues(&r.unscale(trace));
    values[values.len() - 2] <= RANK1_TOL
}

/// Exhaustive finder, registered as `exhaustive`.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExhaustiveFinder;

impl SubspaceFinder for ExhaustiveFinder {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn find(&self, rho: &DensityMatrix) -> Result<Vec<PureSubspace>> {
        brute_subspaces(rho)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub shots: u64,
    pub successes: u64,
    pub empirical_probability: f64,
    pub standard_error: f64,
    pub seed: u64,
    pub rng: String,
    pub per_branch_counts: BTreeMap<String, u64>,
}

/// Samples the selective measurement `{K_n} ∪ {failure}` on ρ.
///
/// Each shot lands in branch `n` with probability `Tr(K_n ρ K_n^dag)`; the
/// failure outcome takes the remainder. Results depend only on `seed`, not
/// on the number of worker threads.
pub fn simulate(protocol: &Protocol, rho: &DensityMatrix, shots: u64, seed: u64) -> Result<SimulationResult> {
    if shots == 0 {
        return Err(Error::Precondition("shots must be at least 1".into()));
    }
    protocol.check_complete()?;
    if let Some(b) = protocol.branches.iter().find(|b| b.kraus.cols() != rho.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "branch `{}` acts on dimension {}, state has dimension {}",
            b.id,
            b.kraus.cols(),
            rho.dim()
        )));
    }
    let probs: Vec<f64> = protocol.branches.iter().map(|b| b.kraus.probability(rho.matrix())).collect();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }

    let per_chunk: Vec<Vec<u64>> = (0..SIM_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let n = shots / SIM_CHUNKS + u64::from(chunk < shots % SIM_CHUNKS);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let mut counts = vec![0u64; cumulative.len()];
            for _ in 0..n {
                let u: f64 = rng.random();
                if let Some(b) = cumulative.iter().position(|&c| u < c) {
                    counts[b] += 1;
                }
            }
            counts
        })
        .collect();

    let mut per_branch_counts = BTreeMap::new();
    let mut successes = 0;
    for (b, branch) in protocol.branches.iter().enumerate() {
        let count: u64 = per_chunk.iter().map(|c| c[b]).sum();
        successes += count;
        per_branch_counts.insert(branch.id.clone(), count);
    }
    let p_hat = successes as f64 / shots as f64;
    Ok(SimulationResult {
        shots,
        successes,
        empirical_probability: p_hat,
        standard_error: (p_hat * (1.0 - p_hat) / shots as f64).sqrt(),
        seed,
        rng: RNG_ALGORITHM.to_string(),
        per_branch_counts,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchVerdict {
    Verified,
    Failed { branch_id: String, fidelity: f64 },
}

impl BranchVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, BranchVerdict::Verified)
    }
}

/// Checks that every success branch leaves ρ proportional to φ.
pub fn verify_branch_outputs(protocol: &Protocol, rho: &DensityMatrix, phi: &PureStateVector) -> BranchVerdict {
    for b in &protocol.branches {
        if b.kraus.cols() != rho.dim() || b.kraus.rows() != phi.dim() {
            return BranchVerdict::Failed { branch_id: b.id.clone(), fidelity: 0.0 };
        }
        let out = b.kraus.sandwich(rho.matrix());
        let trace = out.trace().re;
        if trace <= AMPLITUDE_EPS {
            continue;
        }
        let v = phi.amplitudes();
        let fidelity = (v.adjoint() * &out * v)[(0, 0)].re / trace;
        if fidelity < 1.0 - FIDELITY_TOL {
            return BranchVerdict::Failed { branch_id: b.id.clone(), fidelity };
        }
    }
    BranchVerdict::Verified
}

// ---------------------------------------------------------------------------
// Structured random states

/// A generated state with the maximal pure subspaces its construction forces.
#[derive(Debug, Clone)]
pub struct StructuredState {
    pub rho: DensityMatrix,
    /// Expected maximal pure subspaces, sorted like the finders' output.
    pub expected: Vec<Vec<usize>>,
}

/// Random pure state with exactly `rank` nonzero amplitudes (moduli in
/// [0.3, 1] before normalization, uniform phases).
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> PureStateVector {
    let support = random_subset(rng, dim, rank);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for i in support {
        amps[i] = Complex64::from_polar(rng.random_range(0.3..1.0), rng.random_range(0.0..std::f64::consts::TAU));
    }
    PureStateVector::normalized(amps).expect("nonzero amplitudes")
}

/// Random real profile state (nonnegative amplitudes) of the given rank.
pub fn random_profile_state<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> PureStateVector {
    let w: Vec<f64> = (0..rank).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    PureStateVector::from_profile(&w.iter().map(|x| x / s).collect::<Vec<_>>()).expect("normalized")
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, dim: usize, size: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..dim).collect();
    for i in 0..size.min(dim) {
        let j = rng.random_range(i..dim);
        idx.swap(i, j);
    }
    let mut s = idx[..size.min(dim)].to_vec();
    s.sort_unstable();
    s
}

/// Mixture of 1–3 random pure states with random (possibly overlapping)
/// supports plus diagonal noise on a random subset of indices.
///
/// An index belongs to a pure subspace of component `k` when only `k`
/// populates it; every other populated index is its own maximal subspace.
pub fn structured_random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StructuredState {
    let noise_prob = if rng.random_bool(0.5) { 0.3 } else { 0.0 };
    mixture_state(rng, dim, noise_prob)
}

/// Like [`structured_random_state`] but every populated index carries
/// diagonal noise, so no off-diagonal `A` entry reaches one.
pub fn undistillable_random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StructuredState {
    mixture_state(rng, dim, 1.0)
}

fn mixture_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, noise_prob: f64) -> StructuredState {
    let components = rng.random_range(1..=3usize.min(dim.max(1)));
    let mut rho = CMatrix::zeros(dim, dim);
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for k in 0..components {
        let rank = rng.random_range(1.min(dim)..=dim).max(1);
        let chi = random_pure_state(rng, dim, rank);
        let w = rng.random_range(0.2..1.0);
        rho += crate::linalg::projector(chi.amplitudes()).scale(w);
        for i in chi.support() {
            owners[i].push(k);
        }
    }
    let mut noisy = vec![false; dim];
    for i in 0..dim {
        let populated = !owners[i].is_empty();
        if (populated && rng.random_bool(noise_prob)) || (noise_prob >= 1.0 && populated) {
            rho[(i, i)] += Complex64::new(rng.random_range(0.05..0.3), 0.0);
            noisy[i] = true;
        }
    }
    let trace = rho.trace().re;
    let rho = DensityMatrix::new(rho.unscale(trace)).expect("mixture is a state");

    let mut expected: Vec<Vec<usize>> = Vec::new();
    for k in 0..components {
        let owned: Vec<usize> = (0..dim).filter(|&i| !noisy[i] && owners[i] == [k]).collect();
        if !owned.is_empty() {
            expected.push(owned);
        }
    }
    for i in 0..dim {
        let owned = !noisy[i] && owners[i].len() == 1;
        if !owners[i].is_empty() && !owned {
            expected.push(vec![i]);
        }
    }
    expected.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    StructuredState { rho, expected }
}
