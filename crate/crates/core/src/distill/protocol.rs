//! Multi-branch pure-to-pure protocols reaching `min_l C_l(ψ)/C_l(φ)`.
//!
//! With `x` the sorted squared moduli of ψ and `y = P·φ²` (sorted, padded),
//! the optimum is reached by any vector `u` with `u ≤ x` entrywise and
//! `u ≺ y`. The most spread such `u` is `x` water-filled down to total `P`.
//! Writing `u = D y` for a doubly stochastic `D = Σ_π q_π Π_π` (built from
//! T-transforms) gives one monomial Kraus operator per permutation π, each
//! mapping ψ exactly onto `sqrt(P q_π) φ`, with `Σ K^dag K = diag(u / x) ≤ I`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::kraus::{KrausEntry, StrictlyIncoherentKraus};
use super::pmax_pure;
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::states::PureStateVector;

const MISMATCH_EPS: f64 = 1e-15;
const WEIGHT_EPS: f64 = 1e-15;

/// Optimal strictly incoherent protocol from ψ to φ: success branches and
/// their probabilities, ordered by descending probability.
pub fn optimal_protocol(
    psi: &PureStateVector,
    phi: &PureStateVector,
) -> Result<Vec<(StrictlyIncoherentKraus, f64)>> {
    let source = psi.support_by_modulus();
    let target = phi.support_by_modulus();
    if target.len() > source.len() {
        return Err(Error::RankDeficit { source_rank: source.len(), target_rank: target.len() });
    }
    let p = pmax_pure(psi, phi);
    if p <= 0.0 {
        return Ok(Vec::new());
    }
    let n = source.len();
    let m = target.len();
    let x: Vec<f64> = source.iter().map(|&i| psi.amplitude(i).norm_sqr()).collect();
    let mut y: Vec<f64> = target.iter().map(|&i| p * phi.amplitude(i).norm_sqr()).collect();
    y.resize(n, 0.0);
    let u = water_fill(&x, y.iter().sum());
    let mixture = permutation_mixture(&y, &u);

    let mut out = Vec::with_capacity(mixture.len());
    for (perm, q) in mixture {
        let scale = (p * q).sqrt();
        let entries = (0..n)
            .filter(|&i| perm[i] < m)
            .map(|i| {
                let row = target[perm[i]];
                let col = source[i];
                KrausEntry { row, col, value: scale * phi.amplitude(row) / psi.amplitude(col) }
            })
            .collect();
        let kraus = StrictlyIncoherentKraus::new(phi.dim(), psi.dim(), entries)?;
        let prob = norm_sqr(&kraus.apply(psi.amplitudes()));
        out.push((kraus, prob));
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(out)
}

fn norm_sqr(v: &CVector) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// `min(x_i, h)` with `h` chosen so the entries sum to `total`. `x` must be
/// sorted nonincreasing; returns `x` itself when `total >= Σ x`.
pub(crate) fn water_fill(x: &[f64], total: f64) -> Vec<f64> {
    let sum: f64 = x.iter().sum();
    if total >= sum {
        return x.to_vec();
    }
    let n = x.len();
    let mut tail = sum;
    for j in 1..=n {
        tail -= x[j - 1];
        let h = (total - tail) / j as f64;
        let below_next = j == n || h >= x[j];
        if below_next && h <= x[j - 1] {
            return x.iter().map(|&v| v.min(h)).collect();
        }
    }
    // unreachable for sorted input; fall back to uniform scaling
    x.iter().map(|&v| v * total / sum).collect()
}

/// Decomposes the doubly stochastic map taking `y` to `u` (both sorted
/// nonincreasing, `u ≺ y`, equal sums) into a mixture of permutations.
///
/// Each permutation `π` acts as `(Π y)_i = y[π[i]]`; weights sum to one.
pub(crate) fn permutation_mixture(y: &[f64], u: &[f64]) -> Vec<(Vec<usize>, f64)> {
    let n = y.len();
    let mut cur = y.to_vec();
    let mut steps: Vec<(usize, usize, f64)> = Vec::new();
    for _ in 0..4 * n.max(1) {
        let Some(j) = (0..n).rev().find(|&i| cur[i] - u[i] > MISMATCH_EPS) else { break };
        let Some(k) = (j + 1..n).find(|&i| u[i] - cur[i] > MISMATCH_EPS) else { break };
        let gap = cur[j] - cur[k];
        if gap <= 0.0 {
            break;
        }
        let excess = cur[j] - u[j];
        let deficit = u[k] - cur[k];
        let delta = excess.min(deficit);
        steps.push((j, k, delta / gap));
        if excess <= deficit {
            cur[j] = u[j];
            cur[k] += delta;
        } else {
            cur[j] -= delta;
            cur[k] = u[k];
        }
    }

    let mut mixture: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    mixture.insert((0..n).collect(), 1.0);
    for (j, k, t) in steps {
        let mut next: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (perm, w) in mixture {
            if (1.0 - t) * w > WEIGHT_EPS {
                *next.entry(perm.clone()).or_insert(0.0) += (1.0 - t) * w;
            }
            if t * w > WEIGHT_EPS {
                let mut swapped = perm;
                swapped.swap(j, k);
                *next.entry(swapped).or_insert(0.0) += t * w;
            }
        }
        mixture = next;
    }
    let total: f64 = mixture.values().sum();
    mixture.into_iter().map(|(p, w)| (p, w / total)).collect()
}
