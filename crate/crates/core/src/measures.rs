//! Pure-state coherence measures and probability-vector machinery:
//! majorization, tensor products, power means and Shannon entropy.
//!
//! Vector arguments are plain slices; callers pass distributions of
//! different lengths and the functions zero-pad to the common length.

use crate::states::{sorted_desc, ProbabilityVector, PureStateVector, AMPLITUDE_EPS};

/// Tolerance on partial sums in majorization checks.
pub const MAJORIZATION_TOL: f64 = 1e-10;

/// Suffix sums C_l = sum_{i >= l} |phi_i|^2 of the sorted squared moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct ClProfile {
    values: Vec<f64>,
}

impl ClProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// C_l with 1-based `l`; zero beyond the stored length.
    pub fn get(&self, l: usize) -> f64 {
        self.values.get(l.wrapping_sub(1)).copied().unwrap_or(0.0)
    }
}

/// Number of amplitudes with squared modulus above `AMPLITUDE_EPS`.
pub fn coherence_rank(psi: &PureStateVector) -> usize {
    psi.support().len()
}

pub fn cl_profile(psi: &PureStateVector) -> ClProfile {
    ClProfile { values: suffix_sums(&psi.sorted_profile()) }
}

/// C_l profile of an arbitrary nonnegative weight vector.
pub fn cl_from_weights(weights: &[f64]) -> ClProfile {
    let cleaned: Vec<f64> =
        weights.iter().map(|&x| if x <= AMPLITUDE_EPS { 0.0 } else { x }).collect();
    ClProfile { values: suffix_sums(&sorted_desc(&cleaned)) }
}

fn suffix_sums(sorted: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; sorted.len()];
    let mut acc = 0.0;
    for i in (0..sorted.len()).rev() {
        acc += sorted[i];
        out[i] = acc;
    }
    out
}

/// min_l C_l(p) / C_l(q) over the zero-padded common length.
///
/// Terms with C_l(q) = 0 impose no constraint; C_l(p) = 0 < C_l(q) gives 0.
/// Returns the minimum and the 1-based minimizing `l`.
pub fn min_cl_ratio(p: &[f64], q: &[f64]) -> (f64, usize) {
    let n = p.len().max(q.len());
    let cp = cl_from_weights(p);
    let cq = cl_from_weights(q);
    let mut best = (f64::INFINITY, 1);
    for l in 1..=n {
        let denom = cq.get(l);
        if denom <= 0.0 {
            continue;
        }
        let ratio = cp.get(l) / denom;
        if ratio < best.0 {
            best = (ratio, l);
        }
    }
    if best.0.is_infinite() {
        // q identically zero: nothing to reach.
        return (1.0, 1);
    }
    (best.0.clamp(0.0, 1.0), best.1)
}

/// p majorized by q: every descending partial sum of p is at most that of q.
pub fn majorizes(p: &[f64], q: &[f64]) -> bool {
    let n = p.len().max(q.len());
    let ps = padded_sorted(p, n);
    let qs = padded_sorted(q, n);
    let (mut sp, mut sq) = (0.0, 0.0);
    for i in 0..n {
        sp += ps[i];
        sq += qs[i];
        if sp > sq + MAJORIZATION_TOL {
            return false;
        }
    }
    true
}

fn padded_sorted(v: &[f64], n: usize) -> Vec<f64> {
    let mut w = v.to_vec();
    w.resize(n, 0.0);
    sorted_desc(&w)
}

/// All pairwise products p_i q_j, row-major in (i, j).
pub fn tensor(p: &[f64], q: &[f64]) -> Vec<f64> {
    p.iter().flat_map(|&a| q.iter().map(move |&b| a * b)).collect()
}

pub fn tensor_distributions(p: &ProbabilityVector, q: &ProbabilityVector) -> ProbabilityVector {
    ProbabilityVector::new(tensor(p.as_slice(), q.as_slice()))
        .expect("product of distributions is a distribution")
}

/// Power mean A_alpha(p) = ((1/d) sum p_i^alpha)^(1/alpha), with
/// A_0 the geometric mean and A_{+inf}, A_{-inf} the max and min entries.
///
/// Zero entries: for alpha <= 0 any zero forces the mean to 0; for
/// alpha > 0 zeros contribute nothing to the sum. Evaluated in log space so
/// |alpha| up to a few hundred stays finite.
pub fn power_mean(p: &[f64], alpha: f64) -> f64 {
    let d = p.len();
    if d == 0 {
        return 0.0;
    }
    if alpha == f64::INFINITY {
        return p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    }
    if alpha == f64::NEG_INFINITY {
        return p.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    }
    let has_zero = p.iter().any(|&x| x <= 0.0);
    if alpha <= 0.0 && has_zero {
        return 0.0;
    }
    if alpha == 0.0 {
        let mean_log = p.iter().map(|x| x.ln()).sum::<f64>() / d as f64;
        return mean_log.exp();
    }
    let logs: Vec<f64> = p.iter().filter(|&&x| x > 0.0).map(|x| alpha * x.ln()).collect();
    if logs.is_empty() {
        return 0.0;
    }
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - peak).exp()).sum();
    ((peak + (sum / d as f64).ln()) / alpha).exp()
}

/// Shannon entropy in nats, with 0 ln 0 = 0.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}
