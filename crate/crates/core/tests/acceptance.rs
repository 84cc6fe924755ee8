//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from small independent computations here,
//! not from the library paths under test.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cohdist::catalysis::{gate_deterministic, gate_probabilistic, search_catalyst, AlphaGrid, Probabilistic};
use cohdist::distill::{full_plan, pmax_mixed, single_kraus};
use cohdist::measures::{cl_profile, majorizes, power_mean, shannon_entropy};
use cohdist::oracles::{
    brute_subspaces, random_pure_state, simulate, structured_random_state, undistillable_random_state,
    verify_branch_outputs,
};
use cohdist::states::{DensityMatrix, PureStateVector};
use cohdist::subspaces::{a_matrix, has_rank2_subspace, maximal_pure_subspaces, A_TOL};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn profile(p: &[f64]) -> PureStateVector {
    PureStateVector::from_profile(p).unwrap()
}

/// `min_l Σ_{i≥l} x↓_i / Σ_{i≥l} y↓_i` over l with a nonzero denominator.
fn ratio_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().max(y.len());
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.resize(n, 0.0);
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (x, y) = (sorted(x), sorted(y));
    (0..n)
        .filter_map(|l| {
            let den: f64 = y[l..].iter().sum();
            (den > 1e-12).then(|| x[l..].iter().sum::<f64>() / den)
        })
        .fold(1.0, f64::min)
}

fn branch_total(plan: &cohdist::distill::DistillationPlan, rho: &DensityMatrix) -> f64 {
    plan.branches
        .iter()
        .map(|b| {
            let k = b.kraus.matrix();
            (&k * rho.matrix() * k.adjoint()).trace().re
        })
        .sum()
}

fn pure_of_rank_at_least<R: Rng>(rng: &mut R, dim: usize, min_rank: usize) -> PureStateVector {
    let rank = rng.random_range(min_rank..=dim);
    random_pure_state(rng, dim, rank)
}

fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random::<f64>() }).collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// Random mixture of pairwise averaging steps: the result is majorized by `v`.
fn mix<R: Rng>(rng: &mut R, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for _ in 0..3 {
        let (i, j) = (rng.random_range(0..v.len()), rng.random_range(0..v.len()));
        let t = rng.random::<f64>();
        let (a, b) = (out[i], out[j]);
        out[i] = t * a + (1.0 - t) * b;
        out[j] = (1.0 - t) * a + t * b;
    }
    out
}

fn subspace_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut states = 0;
    for d in 2..=8 {
        for _ in 0..200 {
            let s = structured_random_state(&mut rng, d);
            let fast = maximal_pure_subspaces(&s.rho).unwrap();
            let brute = brute_subspaces(&s.rho).unwrap();
            let same = fast.len() == brute.len()
                && fast.iter().zip(&brute).all(|(a, b)| {
                    a.indices() == b.indices() && (a.weight() - b.weight()).abs() <= 1e-9
                });
            if !same {
                return outcome(false, format!("mismatch at d = {d}: {:?}", s.rho.matrix()));
            }
            states += 1;
        }
    }
    outcome(true, format!("{states} states, clique finder == brute force"))
}

fn protocol_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for n in 0..150 {
        let (rho, phi, oracle) = if n < 100 {
            let d = rng.random_range(2..=6);
            let psi = pure_of_rank_at_least(&mut rng, d, 1);
            let dt = rng.random_range(2..=6);
            let phi = pure_of_rank_at_least(&mut rng, dt, 2);
            let oracle = ratio_oracle(&psi.squared_moduli(), &phi.squared_moduli());
            (psi.density(), phi, Some(oracle))
        } else {
            let d = rng.random_range(2..=8);
            let rho = structured_random_state(&mut rng, d).rho;
            let dt = rng.random_range(2..=4);
            let phi = pure_of_rank_at_least(&mut rng, dt, 2);
            (rho, phi, None)
        };
        let plan = full_plan(&rho, &phi).unwrap();
        let total = branch_total(&plan, &rho);
        worst = worst.max((total - plan.p_max).abs());
        if (total - plan.p_max).abs() > 1e-9 {
            return outcome(false, format!("instance {n}: formula {} vs protocol {total}", plan.p_max));
        }
        if let Some(o) = oracle {
            if (o - plan.p_max).abs() > 1e-9 {
                return outcome(false, format!("instance {n}: formula {} vs ratio oracle {o}", plan.p_max));
            }
        }
        let verdict = verify_branch_outputs(&plan.protocol(), &rho, &phi);
        if !verdict.is_verified() {
            return outcome(false, format!("instance {n}: {verdict:?}"));
        }
    }
    outcome(true, format!("150 instances, max |formula - protocol| = {worst:.1e}"))
}

fn worked_example() -> (DensityMatrix, PureStateVector) {
    let rho = DensityMatrix::from_real_rows(&[
        vec![0.45, 0.15, 0.0],
        vec![0.15, 0.05, 0.0],
        vec![0.0, 0.0, 0.5],
    ])
    .unwrap();
    (rho, profile(&[0.5, 0.5]))
}

fn monte_carlo() -> Outcome {
    const SHOTS: u64 = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut instances = vec![worked_example()];
    while instances.len() < 10 {
        let d = rng.random_range(2..=6);
        let rho = structured_random_state(&mut rng, d).rho;
        let phi = random_pure_state(&mut rng, 2, 2);
        instances.push((rho, phi));
    }
    if (pmax_mixed(&instances[0].0, &instances[0].1).unwrap().p_max - 0.1).abs() > 1e-12 {
        return outcome(false, "worked example does not give 0.1");
    }
    let mut worst_z: f64 = 0.0;
    let mut random = 0;
    for (n, (rho, phi)) in instances.iter().enumerate() {
        let plan = full_plan(rho, phi).unwrap();
        let p = branch_total(&plan, rho);
        let r = simulate(&plan.protocol(), rho, SHOTS, 1000 + n as u64).unwrap();
        let sigma = (p * (1.0 - p) / SHOTS as f64).sqrt();
        let dev = (r.empirical_probability - p).abs();
        if sigma == 0.0 {
            if dev > 1e-12 {
                return outcome(false, format!("instance {n}: deterministic p = {p}, got {}", r.empirical_probability));
            }
            continue;
        }
        random += 1;
        worst_z = worst_z.max(dev / sigma);
        if dev >= 4.0 * sigma {
            return outcome(false, format!("instance {n}: |{} - {p}| = {:.2} sigma", r.empirical_probability, dev / sigma));
        }
    }
    outcome(true, format!("10 instances ({random} with 0 < p < 1) x 10^6 shots, worst deviation {worst_z:.2} sigma"))
}

fn canonical_catalysis() -> Outcome {
    let (p, q) = ([0.4, 0.4, 0.1, 0.1], [0.5, 0.25, 0.25]);
    let (psi, phi) = (profile(&p), profile(&q));
    let rho = psi.density();
    let baseline = ratio_oracle(&p, &q);
    let plan = pmax_mixed(&rho, &phi).unwrap();
    if (baseline - 0.8).abs() > 1e-12 || (plan.p_max - 0.8).abs() > 1e-12 {
        return outcome(false, format!("baseline {} (oracle {baseline})", plan.p_max));
    }
    // c = (0.6, 0.4) makes p⊗c majorized by q⊗c: check the partial sums directly
    let c = [0.6, 0.4];
    let prod = |v: &[f64]| -> Vec<f64> {
        let mut out: Vec<f64> = v.iter().flat_map(|a| c.iter().map(move |b| a * b)).collect();
        out.resize(8, 0.0);
        out.sort_by(|a, b| b.total_cmp(a));
        out
    };
    let (pc, qc) = (prod(&p), prod(&q));
    let (mut sp, mut sq) = (0.0, 0.0);
    let dominated = pc.iter().zip(&qc).all(|(a, b)| {
        sp += a;
        sq += b;
        sp <= sq + 1e-12
    });
    if !dominated {
        return outcome(false, "oracle: (0.6, 0.4) is not a catalyst");
    }
    let gate3 = gate_probabilistic(&rho, &phi).unwrap();
    let gate4 = gate_deterministic(&rho, &phi, &AlphaGrid::default()).unwrap();
    let search = search_catalyst(&rho, &phi, 2, 0.05, &Probabilistic).unwrap();
    let achieved = search.found.as_ref().map_or(0.0, |f| f.1);
    let ok = gate3.family_verdict && gate4.verdict && (achieved - 1.0).abs() <= 1e-9;
    let catalyst = search.found.map(|f| f.0.as_slice().to_vec());
    outcome(
        ok,
        format!(
            "baseline 0.8, gate3 {}, gate4 {}, catalyst {catalyst:?} achieves {achieved}",
            gate3.family_verdict, gate4.verdict
        ),
    )
}

fn gate_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut successes, mut counterexamples) = (0, 0);
    for _ in 0..100 {
        let d = rng.random_range(2..=5);
        let psi = pure_of_rank_at_least(&mut rng, d, 2);
        let dt = rng.random_range(2..=5);
        let phi = pure_of_rank_at_least(&mut rng, dt, 2);
        let rho = psi.density();
        let search = search_catalyst(&rho, &phi, 3, 0.05, &Probabilistic).unwrap();
        if search.found.is_some() {
            successes += 1;
            if !gate_probabilistic(&rho, &phi).unwrap().family_verdict {
                counterexamples += 1;
            }
        }
    }
    outcome(
        counterexamples == 0,
        format!("100 pairs, {successes} search successes, {counterexamples} counterexamples"),
    )
}

fn undistillable() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 0..50 {
        let d = rng.random_range(2..=8);
        let rho = undistillable_random_state(&mut rng, d).rho;
        let a = a_matrix(&rho);
        if (0..d).any(|i| (0..d).any(|j| i != j && (a[(i, j)] - 1.0).abs() <= A_TOL)) {
            return outcome(false, format!("state {n} has a saturated off-diagonal entry"));
        }
        if has_rank2_subspace(&rho) {
            return outcome(false, format!("state {n} reports a rank-2 subspace"));
        }
        for dt in 2..=4 {
            let phi = pure_of_rank_at_least(&mut rng, dt, 2);
            let p = pmax_mixed(&rho, &phi).unwrap().p_max;
            if p != 0.0 {
                return outcome(false, format!("state {n}: p_max = {p}"));
            }
        }
    }
    outcome(true, "50 states x 3 targets, all p_max = 0, no rank-2 subspace")
}

fn measure_invariants() -> Outcome {
    const N: usize = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures: Vec<&str> = Vec::new();
    let mut fail = |name| {
        if !failures.contains(&name) {
            failures.push(name)
        }
    };
    let alphas = [f64::NEG_INFINITY, -5.0, -1.0, -0.3, 0.0, 0.3, 0.9, 1.0, 1.5, 3.0, 10.0, f64::INFINITY];
    for _ in 0..N {
        let n = rng.random_range(2..=8);
        let r = random_distribution(&mut rng, n);
        let q = mix(&mut rng, &r);
        let p = mix(&mut rng, &q);
        // transitivity along p ≺ q ≺ r
        if !(majorizes(&p, &q) && majorizes(&q, &r) && majorizes(&p, &r)) {
            fail("transitivity");
        }
        // antisymmetry: mutual majorization only for rearrangements
        let mut shuffled = r.clone();
        shuffled.shuffle(&mut rng);
        if !(majorizes(&shuffled, &r) && majorizes(&r, &shuffled)) {
            fail("antisymmetry (rearrangement)");
        }
        let mut ps = p.clone();
        let mut rs = r.clone();
        ps.sort_by(|a, b| b.total_cmp(a));
        rs.sort_by(|a, b| b.total_cmp(a));
        let equal = ps.iter().zip(&rs).all(|(a, b)| (a - b).abs() <= 1e-10);
        if majorizes(&r, &p) && !equal {
            fail("antisymmetry");
        }
        // Schur concavity of entropy
        if shannon_entropy(&p) < shannon_entropy(&r) - 1e-12 {
            fail("Schur concavity");
        }
        // power means nondecreasing in alpha
        let means: Vec<f64> = alphas.iter().map(|&a| power_mean(&r, a)).collect();
        if means.windows(2).any(|w| w[0] > w[1] * (1.0 + 1e-9) + 1e-15) {
            fail("power-mean monotonicity");
        }
        // C_l profile: starts at 1, nonincreasing, permutation invariant
        let psi = profile(&r);
        let c = cl_profile(&psi);
        let c_shuffled = cl_profile(&profile(&shuffled));
        if (c.get(1) - 1.0).abs() > 1e-12 || c.values().windows(2).any(|w| w[1] > w[0] + 1e-15) {
            fail("C_l monotonicity");
        }
        if c.values().iter().zip(c_shuffled.values()).any(|(a, b)| (a - b).abs() > 1e-12) {
            fail("C_l permutation invariance");
        }
    }
    if failures.is_empty() {
        outcome(true, format!("{N} random vectors per invariant, 6 invariants"))
    } else {
        outcome(false, format!("violated: {}", failures.join(", ")))
    }
}

fn multi_branch_witness() -> Outcome {
    let (p, q) = ([0.5, 0.26, 0.24], [0.4, 0.35, 0.25]);
    let (psi, phi) = (profile(&p), profile(&q));
    let rho = psi.density();
    let plan = full_plan(&rho, &phi).unwrap();
    let total = branch_total(&plan, &rho);
    // one diagonal-aligned Kraus operator: min_i x_i / y_i on sorted profiles
    let aligned = p.iter().zip(&q).map(|(a, b)| a / b).fold(1.0, f64::min);
    let single = single_kraus(&psi, &phi).unwrap().probability(rho.matrix());
    let ok = (total - 5.0 / 6.0).abs() <= 1e-9
        && plan.branches.len() >= 2
        && (aligned - 0.26 / 0.35).abs() < 1e-12
        && (single - aligned).abs() < 1e-9
        && single < 5.0 / 6.0;
    outcome(
        ok,
        format!("plan total {total:.12} with {} branches; single Kraus {single:.6}", plan.branches.len()),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("subspace oracle equivalence", Duration::from_secs(30), subspace_equivalence),
        ("formula / protocol agreement", Duration::from_secs(30), protocol_agreement),
        ("Monte Carlo consistency", Duration::from_secs(60), monte_carlo),
        ("canonical catalysis instance", Duration::from_secs(5), canonical_catalysis),
        ("gate soundness sweep", Duration::from_secs(60), gate_soundness),
        ("undistillable states", Duration::from_secs(5), undistillable),
        ("measure invariants", Duration::from_secs(10), measure_invariants),
        ("multi-branch witness", Duration::from_secs(1), multi_branch_witness),
    ];
    let mut all_ok = true;
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let ok = result.ok && in_time;
        all_ok &= ok;
        println!(
            "{} {}. {name}: {} [{:.2}s / {}s{}]",
            if ok { "PASS" } else { "FAIL" },
            n + 1,
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" },
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
